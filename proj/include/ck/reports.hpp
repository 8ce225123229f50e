#pragma once

#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ck/formats.hpp"
#include "ck/invariants.hpp"
#include "ck/moves.hpp"
#include "ck/realize.hpp"

namespace ck {

namespace report_detail {

inline std::string open_set_name(const CondensationPoset& poset, const OpenSet& u) {
    if (u.empty()) return "{}";
    std::string s = "{";
    for (std::size_t i = 0; i < u.size(); ++i) s += (i ? " " : "") + poset.point_name(u[i]);
    return s + "}";
}

inline void print_matrix_indented(std::ostream& out, const IntMatrix& m,
                                  const std::string& indent) {
    if (m.rows() == 0 || m.cols() == 0) {
        out << indent << "(" << m.rows() << "x" << m.cols() << " empty)\n";
        return;
    }
    for (std::size_t i = 0; i < m.rows(); ++i) {
        out << indent;
        for (std::size_t j = 0; j < m.cols(); ++j) out << (j ? " " : "") << m(i, j);
        out << "\n";
    }
}

inline void print_kdata(std::ostream& out, const KData& k, const std::string& indent) {
    out << indent << "K0  = " << k.k0.group().to_string() << "\n";
    out << indent << "K1  = " << k.k1_group.to_string() << "\n";
    out << indent << "Ext = " << k.ext.group().to_string() << "\n";
}

} // namespace report_detail

/// Full invariants report for a parsed matrix. Returns the exit status the
/// CLI should use: 0 when the complete report (including the FK bundle) was
/// produced, 1 when validation or Condition (K) blocks it.
inline int write_invariants_report(std::ostream& out, const IntMatrix& input, bool verbose) {
    out << "ck invariants report v1\n";
    out << "matrix: " << input.rows() << "x" << input.cols() << "\n";
    report_detail::print_matrix_indented(out, input, "  ");

    ValidationReport vr = validate(input);
    out << "validation: " << vr.to_string() << "\n";
    if (!vr.ok()) {
        out << "verdict: invalid input\n";
        return 1;
    }
    CKMatrix a(input);

    KData k = k_data(a);
    out << "K0  = " << k.k0.group().to_string() << "\n";
    out << "K1  = " << k.k1_group.to_string() << "\n";
    out << "Ext = " << k.ext.group().to_string() << "\n";
    if (verbose) {
        out << "K1 basis (columns, on vertex coordinates):\n";
        report_detail::print_matrix_indented(out, k.k1_basis, "  ");
    }

    ConditionKResult ckr = condition_K(a);
    out << "Condition (K): " << (ckr.holds ? "satisfied" : "violated") << "\n";
    if (!ckr.holds) {
        out << "  witness component (a single simple cycle): {";
        for (std::size_t i = 0; i < ckr.witness.size(); ++i)
            out << (i ? " " : "") << a.labels()[ckr.witness[i]];
        out << "}\n";
        out << "verdict: primitive-ideal poset and filtered K-theory not computed\n";
        return 1;
    }

    FKBundle b = fk(a);
    out << "Prim poset: " << b.poset.point_count() << " point(s)\n";
    for (std::size_t p = 0; p < b.poset.point_count(); ++p) {
        out << "  " << b.poset.point_name(p) << " = {";
        const auto& vs = b.poset.point_vertices(p);
        for (std::size_t i = 0; i < vs.size(); ++i) out << (i ? " " : "") << a.labels()[vs[i]];
        out << "}" << (b.poset.is_closed_point(p) ? " (closed)" : "") << "\n";
    }
    out << "  order (p < q means every ideal containing q contains p):\n";
    bool any_rel = false;
    for (std::size_t p = 0; p < b.poset.point_count(); ++p)
        for (std::size_t q = 0; q < b.poset.point_count(); ++q)
            if (p != q && b.poset.leq(p, q)) {
                out << "    " << b.poset.point_name(p) << " < " << b.poset.point_name(q) << "\n";
                any_rel = true;
            }
    if (!any_rel) out << "    (none)\n";

    out << "open sets (gauge-invariant ideals): " << b.opens.size() << "\n";
    for (std::size_t i = 0; i < b.opens.size(); ++i) {
        out << "  ideal " << report_detail::open_set_name(b.poset, b.opens[i]) << ": vertices {";
        const auto& hs = b.ideal_vertex_sets[i];
        for (std::size_t j = 0; j < hs.size(); ++j) out << (j ? " " : "") << a.labels()[hs[j]];
        out << "}\n";
        report_detail::print_kdata(out, b.kdata[i], "    ");
    }

    out << "six-term sequences (one per one-point step):\n";
    for (const FKBundle::Step& s : b.steps) {
        out << "  step " << report_detail::open_set_name(b.poset, b.opens[s.u_index]) << " + "
            << b.poset.point_name(s.point) << ":\n";
        out << "    0 -> K1(I) -> K1(A) -> K1(B) -> K0(I) -> K0(A) -> K0(B) -> 0\n";
        out << "    K1(I) = " << s.seq.ideal.k1_group.to_string()
            << ", K1(A) = " << s.seq.middle.k1_group.to_string()
            << ", K1(B) = " << s.seq.quotient.k1_group.to_string() << "\n";
        out << "    K0(I) = " << s.seq.ideal.k0.group().to_string()
            << ", K0(A) = " << s.seq.middle.k0.group().to_string()
            << ", K0(B) = " << s.seq.quotient.k0.group().to_string() << "\n";
        out << "    index map (K1(B) basis -> K0(I) vertex generators):\n";
        report_detail::print_matrix_indented(out, s.seq.index_map.matrix, "      ");
        if (verbose) {
            out << "    block permutation (quotient block then ideal block):";
            for (std::size_t v : s.seq.permutation) out << " " << a.labels()[v];
            out << "\n";
            out << "    K1(B) basis (columns, on quotient-block coordinates):\n";
            report_detail::print_matrix_indented(out, s.seq.quotient.k1_basis, "      ");
        }
        out << "    exact: " << (s.seq.exactness.exact ? "yes" : "NO") << "\n";
        out << "    exponential map K0(B) -> K1(I): "
            << (s.seq.exponential.matrix.is_zero() ? "zero (vanishes)" : "NONZERO") << "\n";
    }

    out << "machine:\n";
    out << "  k0 = " << k.k0.group().to_string() << "\n";
    out << "  k1 = " << k.k1_group.to_string() << "\n";
    out << "  ext = " << k.ext.group().to_string() << "\n";
    out << "  condition_k = yes\n";
    out << "  prim_points = " << b.poset.point_count() << "\n";
    out << "  ideals = " << b.opens.size() << "\n";
    out << "  six_term_exact = yes\n";
    out << "verdict: ok\n";
    return 0;
}

inline int write_synthesis_report(std::ostream& out, const TargetSpec& spec,
                                  const SynthesisResult& result, bool verbose) {
    out << "ck synthesis report v1\n";
    out << "target points: " << spec.points.size() << "\n";
    for (const TargetPoint& p : spec.points) {
        AbelianGroup g = AbelianGroup::from_invariant_factors(p.divisors, p.free_rank);
        out << "  " << p.name << ": K0 = " << g.to_string() << ", K1 = "
            << AbelianGroup::free(p.free_rank).to_string();
        if (!p.attach.empty()) {
            out << ", attach {";
            for (std::size_t i = 0; i < p.attach.size(); ++i)
                out << (i ? " " : "") << p.attach[i];
            out << "}";
        }
        out << "\n";
    }
    out << "result matrix: " << result.matrix.size() << "x" << result.matrix.size() << "\n";
    report_detail::print_matrix_indented(out, result.matrix.matrix(), "  ");
    for (const SynthesisStep& s : result.steps) {
        if (!s.requested) continue;
        out << "step " << s.point_name << ":\n";
        out << "  class coordinates: " << s.coordinates << "\n";
        out << "  requested class:\n";
        report_detail::print_matrix_indented(out, s.requested->value, "    ");
        out << "  connecting block N':\n";
        report_detail::print_matrix_indented(out, s.n_prime, "    ");
        out << "  recomputed class:\n";
        report_detail::print_matrix_indented(out, s.recomputed->value, "    ");
    }
    if (verbose) {
        out << "vertex labels:";
        for (const std::string& l : result.matrix.labels()) out << " " << l;
        out << "\n";
    }
    out << "checks:\n";
    for (const SynthesisCheck& c : result.checks)
        out << "  [" << (c.ok ? "ok" : "FAIL") << "] " << c.name
            << (c.detail.empty() ? "" : " (" + c.detail + ")") << "\n";
    out << "machine:\n";
    out << "  points = " << spec.points.size() << "\n";
    out << "  size = " << result.matrix.size() << "\n";
    out << "  all_green = " << (result.all_green() ? "yes" : "no") << "\n";
    out << "verdict: " << (result.all_green() ? "all green" : "FAILED") << "\n";
    return result.all_green() ? 0 : 2;
}

inline int write_normalize_report(std::ostream& out, const std::string& move,
                                  const CKMatrix& before, const CKMatrix& after) {
    out << "ck normalize report v1\n";
    out << "move: " << move << "\n";
    out << "input: " << before.size() << " vertices; output: " << after.size()
        << " vertices\n";
    out << "output is {0,1}-valued: " << (after.is_zero_one() ? "yes" : "NO") << "\n";
    ValidationReport vr = validate(after);
    out << "output validation: " << vr.to_string() << "\n";

    MoveDiff d = compare_invariants(before, after);
    out << "invariant diff:\n";
    out << "  K0 preserved:  " << (d.k0_ok ? "yes" : "NO") << "\n";
    out << "  K1 preserved:  " << (d.k1_ok ? "yes" : "NO") << "\n";
    out << "  Ext preserved: " << (d.ext_ok ? "yes" : "NO") << "\n";
    out << "  Condition (K) verdict preserved: " << (d.condition_k_ok ? "yes" : "NO") << "\n";
    out << "  poset + per-ideal K-data preserved: " << (d.poset_ok ? "yes" : "NO") << "\n";
    bool ok = d.all_ok() && after.is_zero_one() && vr.ok();
    out << "machine:\n";
    out << "  input_size = " << before.size() << "\n";
    out << "  output_size = " << after.size() << "\n";
    out << "  preserved = " << (ok ? "yes" : "no") << "\n";
    out << "verdict: " << (ok ? "invariants preserved" : "MISMATCH") << "\n";
    return ok ? 0 : 2;
}

} // namespace ck
