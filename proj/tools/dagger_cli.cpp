#include <omp.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dagger/acceptance.hpp"
#include "dagger/spec_io.hpp"

using namespace dagger;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitSchema = 2;
constexpr int kExitPrecision = 3;
constexpr int kExitInstability = 4;

void apply_thread_cap() {
    const char* env = std::getenv("DAGGER_THREADS");
    if (!env) return;
    const int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
}

std::pair<int, int> parse_bounds(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw SchemaError("--bounds expects D,E");
    Json d = s.substr(0, comma), e = s.substr(comma + 1);
    const auto D = json_int_value(d, "--bounds D"), E = json_int_value(e, "--bounds E");
    if (D < 0 || E < 0 || D > 64 || E > 64) throw SchemaError("--bounds out of range");
    return {static_cast<int>(D), static_cast<int>(E)};
}

int emit(const Json& report, const std::string& json_out) {
    const std::string text = dump_report(report);
    if (json_out.empty()) {
        std::cout << text;
        return 0;
    }
    std::ofstream out(json_out, std::ios::binary);
    if (!out) {
        std::cerr << "cannot write " << json_out << "\n";
        return kExitSchema;
    }
    out << text;
    std::cout << report.value("verdict", "") << "\n";
    return 0;
}

int self_test(std::uint64_t seed) {
    std::cout << "acceptance matrix (seed " << seed << ")\n";
    int failed = 0;
    run_acceptance(seed, [&](const CriterionResult& r) {
        std::cout << format_criterion(r) << std::endl;
        failed += !r.pass();
    });
    std::cout << (failed ? "FAIL" : "PASS") << ": " << 7 - failed << "/7 criteria\n";
    return failed ? kExitFail : 0;
}

}  // namespace

int main(int argc, char** argv) {
    apply_thread_cap();

    CLI::App app{"dagger: finite-precision p-adic calculus driver"};
    app.fallthrough();
    app.require_subcommand(0, 1);

    std::string spec_path, json_out, bounds_text;
    std::uint64_t seed = 0;
    int precision = 0, depth = 0;
    bool run_self_test = false, timing = false;
    auto* seed_opt = app.add_option("--seed", seed, "random seed for the property batteries");
    app.add_option("--spec", spec_path, "variety spec (JSON)");
    app.add_option("--json-out", json_out, "write the report here instead of stdout");
    auto* bounds_opt = app.add_option("--bounds", bounds_text, "truncation bounds D,E");
    auto* prec_opt = app.add_option("--precision", precision, "p-adic precision s")->check(CLI::Range(1, 62));
    auto* depth_opt = app.add_option("--depth", depth, "zeta depth M")->check(CLI::Range(1, 12));
    app.add_flag("--self-test", run_self_test, "run the acceptance matrix");
    app.add_flag("--timing", timing, "add wall time to the report (breaks byte-identical output)");

    auto* zeta_cmd = app.add_subcommand("zeta", "zeta function with brute-force cross-check");
    auto* coh_cmd = app.add_subcommand("cohomology", "de Rham dimensions, bases, stability, homotopy/Gysin checks");
    auto* group_cmd = app.add_subcommand("group", "automorphism group property battery");
    auto* local_cmd = app.add_subcommand("localcoh", "local cohomology annihilators, coordinate changes, purity");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitSchema;
    }

    if (run_self_test) return self_test(seed_opt->count() ? seed : 20240601ULL);

    std::string command;
    if (zeta_cmd->parsed()) command = "zeta";
    if (coh_cmd->parsed()) command = "cohomology";
    if (group_cmd->parsed()) command = "group";
    if (local_cmd->parsed()) command = "localcoh";
    if (command.empty()) {
        std::cerr << app.help();
        return kExitSchema;
    }

    const auto t0 = std::chrono::steady_clock::now();
    RunOutcome out;
    int code = 0;
    try {
        Overrides o;
        if (seed_opt->count()) o.seed = seed;
        if (prec_opt->count()) o.precision = precision;
        if (depth_opt->count()) o.depth = depth;
        if (bounds_opt->count()) {
            const auto [D, E] = parse_bounds(bounds_text);
            o.D = D;
            o.E = E;
        }
        Json spec = nullptr;
        if (!spec_path.empty()) {
            spec = read_spec_file(spec_path);
        } else if (command != "group" && command != "localcoh") {
            throw SchemaError(command + " needs --spec");
        }
        if (command == "zeta") out = run_zeta(spec, o);
        if (command == "cohomology") out = run_cohomology(spec, o);
        if (command == "group") out = run_group(spec, o);
        if (command == "localcoh") out = run_localcoh(spec, o);
        code = out.exit_code;
    } catch (const SchemaError& e) {
        out.report = error_report(command, "schema", e.what());
        code = kExitSchema;
    } catch (const nlohmann::json::exception& e) {
        out.report = error_report(command, "schema", e.what());
        code = kExitSchema;
    } catch (const PrecisionError& e) {
        out.report = error_report(command, "precision", e.what());
        code = kExitPrecision;
    } catch (const InstabilityError& e) {
        out.report = error_report(command, "instability", e.what());
        code = kExitInstability;
    } catch (const DomainError& e) {
        out.report = error_report(command, "domain", e.what());
        code = kExitSchema;
    } catch (const Error& e) {
        out.report = error_report(command, "internal", e.what());
        code = kExitFail;
    }
    if (code >= kExitSchema) std::cerr << "dagger " << command << ": " << out.report["error"]["message"].get<std::string>() << "\n";
    if (timing)
        out.report["wall_time_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const int io = emit(out.report, json_out);
    return io ? io : code;
}
