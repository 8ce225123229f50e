#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "ck/reports.hpp"

namespace ck {

namespace cli_detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("cannot write '" + path + "'");
    out << text;
}

} // namespace cli_detail

// Exit codes: 0 success, 1 input error, 2 verification/invariant failure.

inline int cmd_invariants(const std::string& matrix_file, std::ostream& out, std::ostream& err,
                          bool verbose = false) {
    try {
        IntMatrix m = read_matrix_string(cli_detail::read_file(matrix_file));
        return write_invariants_report(out, m, verbose);
    } catch (const input_error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const internal_error& e) {
        err << "internal invariant violation: " << e.what() << "\n";
        return 2;
    }
}

inline int cmd_synthesize(const std::string& spec_file, const std::string& out_file,
                          std::ostream& out, std::ostream& err, bool verbose = false) {
    try {
        TargetSpec spec = read_target_spec_string(cli_detail::read_file(spec_file));
        SynthesisResult result = synthesize(spec);
        std::ostringstream mat;
        write_matrix(mat, result.matrix.matrix());
        if (out_file.empty()) {
            out << mat.str();
        } else {
            cli_detail::write_file(out_file, mat.str());
        }
        return write_synthesis_report(out, spec, result, verbose);
    } catch (const input_error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const internal_error& e) {
        err << "internal invariant violation: " << e.what() << "\n";
        return 2;
    }
}

inline int cmd_normalize(const std::string& matrix_file, const std::string& move,
                         const std::string& out_file, std::ostream& out, std::ostream& err) {
    try {
        IntMatrix m = read_matrix_string(cli_detail::read_file(matrix_file));
        ValidationReport vr = validate(m);
        if (!vr.ok()) throw input_error("invalid matrix: " + vr.to_string());
        CKMatrix a(m);
        CKMatrix b(IntMatrix(0, 0));
        if (move == "edge") {
            b = edge_matrix(a);
        } else if (move == "outsplit") {
            b = out_split(a);
        } else {
            throw input_error("unknown move '" + move + "' (expected edge or outsplit)");
        }
        std::ostringstream mat;
        write_matrix(mat, b.matrix());
        if (out_file.empty()) {
            out << mat.str();
        } else {
            cli_detail::write_file(out_file, mat.str());
        }
        return write_normalize_report(out, move, a, b);
    } catch (const input_error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const internal_error& e) {
        err << "internal invariant violation: " << e.what() << "\n";
        return 2;
    }
}

} // namespace ck
