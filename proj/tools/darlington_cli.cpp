#include <darlington/cli.hpp>

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    using namespace darlington;
    CLI::App app{"Inner and symmetric inner extensions of Schur functions in state-space form"};
    app.require_subcommand(1);

    CommandOptions opts;
    std::string file;
    bool as_json = false;
    double tol = 0.0;
    double omega0 = 0.0;
    std::string out;

    auto common = [&](CLI::App* sub) {
        sub->add_option("file", file, "problem file (JSON)")->required();
        sub->add_option("--tol", tol, "certificate tolerance (overrides DARLINGTON_TOL)")->check(CLI::PositiveNumber);
        sub->add_flag("--json", as_json, "print the machine-readable report");
    };

    CLI::App* check = app.add_subcommand("check", "minimality, contractivity, symmetry and Schur checks");
    common(check);
    check->add_option("--mobius", omega0, "test contractivity at i*omega0 instead of infinity");

    CLI::App* synth = app.add_subcommand("synthesize", "compute an inner extension");
    common(synth);
    synth->add_option("--mode", opts.mode, "inner | symmetric | minimal-symmetric")
        ->check(CLI::IsMember({"inner", "symmetric", "minimal-symmetric"}));
    synth->add_option("--solution", opts.solution, "Riccati solution: min | max")->check(CLI::IsMember({"min", "max"}));
    synth->add_option("--mobius", omega0, "move i*omega0 to infinity before solving");
    synth->add_option("--out", out, "write the extension realization to this file");

    CLI::App* scalar = app.add_subcommand("scalar", "scalar factorization and minimal symmetric extension");
    common(scalar);
    scalar->add_option("--out", out, "write the extension realization to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_input;
    }

    CLI::App* used = app.get_subcommands().front();
    if (used->count("--tol")) opts.tol = tol;
    if (used->get_option_no_throw("--mobius") && used->count("--mobius")) opts.mobius = omega0;
    if (used->get_option_no_throw("--out") && used->count("--out")) opts.out = out;

    Report rep;
    if (used == check)
        rep = cmd_check(file, opts);
    else if (used == synth)
        rep = cmd_synthesize(file, opts);
    else
        rep = cmd_scalar(file, opts);

    if (as_json)
        std::cout << rep.data.dump(2) << "\n";
    else
        (rep.exit_code == exit_input || rep.exit_code == exit_stage ? std::cerr : std::cout) << rep.text();
    return rep.exit_code;
}
