#pragma once

#include <cctype>
#include <cstddef>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ck/graph.hpp"
#include "ck/realize.hpp"

namespace ck {

namespace detail {

inline std::string strip_comment(const std::string& line) {
    auto pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

inline std::vector<std::string> tokens(const std::string& line) {
    std::istringstream is(line);
    std::vector<std::string> out;
    std::string t;
    while (is >> t) out.push_back(t);
    return out;
}

inline bool looks_like_int(const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

inline Int parse_int(const std::string& s, std::size_t line_no, const char* what) {
    if (!looks_like_int(s))
        throw input_error("line " + std::to_string(line_no) + ": expected " + what + ", got '" +
                          s + "'");
    return Int(s);
}

} // namespace detail

/// Matrix text format: optional comment lines, then the size n, then n rows of
/// n whitespace-separated integers.
inline IntMatrix read_matrix(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::pair<Int, std::size_t>> values; // value, source line
    while (std::getline(in, line)) {
        ++line_no;
        for (const std::string& t : detail::tokens(detail::strip_comment(line)))
            values.emplace_back(detail::parse_int(t, line_no, "an integer"), line_no);
    }
    if (values.empty()) throw input_error("matrix file is empty");
    if (values[0].first < 0)
        throw input_error("line " + std::to_string(values[0].second) +
                          ": matrix size must be non-negative");
    const std::size_t n = static_cast<std::size_t>(values[0].first);
    if (values.size() != 1 + n * n)
        throw input_error("matrix file declares size " + std::to_string(n) + " but contains " +
                          std::to_string(values.size() - 1) + " entries, expected " +
                          std::to_string(n * n));
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = values[1 + i * n + j].first;
    return m;
}

inline IntMatrix read_matrix_string(const std::string& text) {
    std::istringstream is(text);
    return read_matrix(is);
}

inline void write_matrix(std::ostream& out, const IntMatrix& m) {
    out << "# ck matrix v1\n" << m.rows() << "\n";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) out << (j ? " " : "") << m(i, j);
        out << "\n";
    }
}

/// Target spec text format: a sequence of point blocks,
///
///   point <name>
///   divisors <d1> <d2> ...     (optional; invariant-factor chain)
///   free_rank <r>              (optional, default 0)
///   attach <name> <name> ...   (optional; open set of earlier points)
///   beta                       (optional; rows of the class matrix follow)
///   <row of integers>
///   ...
///
/// A point without an attach line starts a new direct summand.
inline TargetSpec read_target_spec(std::istream& in) {
    TargetSpec spec;
    TargetPoint* current = nullptr;
    std::vector<IntVec> beta_rows;
    bool in_beta = false;
    std::size_t beta_line = 0;

    auto flush_beta = [&]() {
        if (!in_beta) return;
        in_beta = false;
        if (!current) return;
        std::size_t cols = beta_rows.empty() ? 0 : beta_rows[0].size();
        for (const IntVec& r : beta_rows)
            if (r.size() != cols)
                throw input_error("line " + std::to_string(beta_line) +
                                  ": ragged beta matrix for point '" + current->name + "'");
        IntMatrix b(beta_rows.size(), cols);
        for (std::size_t i = 0; i < beta_rows.size(); ++i)
            for (std::size_t j = 0; j < cols; ++j) b(i, j) = beta_rows[i][j];
        current->beta = std::move(b);
        beta_rows.clear();
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::vector<std::string> t = detail::tokens(detail::strip_comment(line));
        if (t.empty()) continue;
        if (in_beta && detail::looks_like_int(t[0])) {
            IntVec row;
            for (const std::string& s : t)
                row.push_back(detail::parse_int(s, line_no, "a beta entry"));
            beta_rows.push_back(std::move(row));
            beta_line = line_no;
            continue;
        }
        flush_beta();
        const std::string& key = t[0];
        if (key == "point") {
            if (t.size() != 2)
                throw input_error("line " + std::to_string(line_no) +
                                  ": 'point' takes exactly one name");
            spec.points.push_back({});
            current = &spec.points.back();
            current->name = t[1];
        } else if (!current) {
            throw input_error("line " + std::to_string(line_no) + ": '" + key +
                              "' before any 'point'");
        } else if (key == "divisors") {
            for (std::size_t i = 1; i < t.size(); ++i)
                current->divisors.push_back(detail::parse_int(t[i], line_no, "a divisor"));
        } else if (key == "free_rank") {
            if (t.size() != 2)
                throw input_error("line " + std::to_string(line_no) +
                                  ": 'free_rank' takes one integer");
            Int r = detail::parse_int(t[1], line_no, "a free rank");
            if (r < 0)
                throw input_error("line " + std::to_string(line_no) + ": negative free rank");
            current->free_rank = static_cast<std::size_t>(r);
        } else if (key == "attach") {
            for (std::size_t i = 1; i < t.size(); ++i) current->attach.push_back(t[i]);
        } else if (key == "beta") {
            if (t.size() != 1)
                throw input_error("line " + std::to_string(line_no) +
                                  ": 'beta' starts a block; rows follow on their own lines");
            in_beta = true;
        } else {
            throw input_error("line " + std::to_string(line_no) + ": unknown keyword '" + key +
                              "'");
        }
    }
    flush_beta();
    if (spec.points.empty()) throw input_error("target spec file contains no points");
    return spec;
}

inline TargetSpec read_target_spec_string(const std::string& text) {
    std::istringstream is(text);
    return read_target_spec(is);
}

inline void write_target_spec(std::ostream& out, const TargetSpec& spec) {
    out << "# ck targetspec v1\n";
    for (const TargetPoint& p : spec.points) {
        out << "point " << p.name << "\n";
        if (!p.divisors.empty()) {
            out << "divisors";
            for (const Int& d : p.divisors) out << " " << d;
            out << "\n";
        }
        if (p.free_rank > 0) out << "free_rank " << p.free_rank << "\n";
        if (!p.attach.empty()) {
            out << "attach";
            for (const std::string& a : p.attach) out << " " << a;
            out << "\n";
        }
        if (p.beta && !p.beta->empty()) {
            out << "beta\n";
            for (std::size_t i = 0; i < p.beta->rows(); ++i) {
                for (std::size_t j = 0; j < p.beta->cols(); ++j)
                    out << (j ? " " : "") << (*p.beta)(i, j);
                out << "\n";
            }
        }
        out << "\n";
    }
}

} // namespace ck
