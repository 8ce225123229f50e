#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ck/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"K-theory invariants of Cuntz-Krieger matrices and synthesis of matrices "
                 "realizing a prescribed ideal structure"};
    app.require_subcommand(1);
    app.fallthrough();
    bool verbose = false;
    app.add_flag("--verbose", verbose, "print bases, permutations and coordinate details");

    std::string inv_file;
    auto* inv = app.add_subcommand(
        "invariants", "K0, K1, Ext, Condition (K), primitive-ideal poset, filtered K-theory");
    inv->add_option("file", inv_file, "matrix file")->required();

    std::string syn_file, syn_out;
    auto* syn = app.add_subcommand(
        "synthesize", "construct a matrix realizing a target spec, with verification");
    syn->add_option("file", syn_file, "target spec file")->required();
    syn->add_option("-o,--output", syn_out, "write the matrix to this file");

    std::string norm_file, norm_out, norm_move = "edge";
    auto* norm = app.add_subcommand(
        "normalize", "turn a non-negative matrix into a {0,1} matrix, preserving invariants");
    norm->add_option("file", norm_file, "matrix file")->required();
    norm->add_option("--move", norm_move, "edge | outsplit")->capture_default_str();
    norm->add_option("-o,--output", norm_out, "write the matrix to this file");

    CLI11_PARSE(app, argc, argv);

    if (inv->parsed()) return ck::cmd_invariants(inv_file, std::cout, std::cerr, verbose);
    if (syn->parsed())
        return ck::cmd_synthesize(syn_file, syn_out, std::cout, std::cerr, verbose);
    if (norm->parsed())
        return ck::cmd_normalize(norm_file, norm_move, norm_out, std::cout, std::cerr);
    return 1;
}
