#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "cmskrylov/experiment.hpp"

using namespace cmskrylov;

namespace {

cplx parse_shift(const std::string& text) {
    const auto comma = text.find(',');
    try {
        if (comma == std::string::npos) return {std::stod(text), 0.0};
        return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
    } catch (const std::exception&) {
        throw InvalidArgument("invalid shift '" + text + "', expected RE[,IM]");
    }
}

std::uint64_t env_seed() {
    const char* env = std::getenv("CMSKRYLOV_SEED");
    if (!env || !*env) return 1;
    try {
        return std::stoull(env);
    } catch (const std::exception&) {
        throw InvalidArgument(std::string("invalid CMSKRYLOV_SEED '") + env + "'");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Krylov quadrature rules and Chebyshev-Markov-Stieltjes bounds"};
    app.set_version_flag("--version", std::string(kVersion));

    std::string preset, matrix, method, shift, vector = "random", metric = "identity", outputs, out, tol_file, label;
    std::optional<int> m, rho;
    std::optional<double> xi;
    std::optional<std::uint64_t> seed;
    bool no_reference = false, list = false;

    app.add_flag("--list-presets", list, "List presets and exit");
    app.add_option("--preset", preset, "Run a named preset");
    app.add_option("--matrix", matrix, "laplacian:N | diag:LO:HI | diag:v1,v2,... | mtx:PATH");
    app.add_option("--method", method, "poly | qor-poly | sai-real | sai-complex | qor-sai | extended");
    app.add_option("--m", m, "Krylov dimension");
    app.add_option("--shift", shift, "Pole s as RE[,IM]");
    app.add_option("--xi", xi, "Preassigned eigenvalue for qor methods");
    app.add_option("--rho", rho, "Extended Krylov parameter (m = 2 rho - 1)");
    app.add_option("--seed", seed, "Seed for the random starting vector (fallback: CMSKRYLOV_SEED, then 1)");
    app.add_option("--vector", vector, "random | ones | file:PATH");
    app.add_option("--metric", metric, "identity | mtx:PATH");
    app.add_option("--outputs", outputs, "Comma list of rule,bounds,F,Fs,stepfuncs,quadrature,omega");
    app.add_option("--label", label, "Artifact file stem");
    app.add_option("--out", out, "Output directory");
    app.add_flag("--no-reference", no_reference, "Skip the exact spectral reference (bound-only mode)");
    app.add_option("--tol-profile", tol_file, "JSON file overriding tolerances");
    CLI11_PARSE(app, argc, argv);

    try {
        if (list) {
            for (const auto& p : list_presets()) std::cout << fmt::format("{:<20} {}\n", p.name, p.description);
            return 0;
        }
        if (out.empty()) throw InvalidArgument("--out is required");
        std::vector<ExperimentConfig> configs;
        if (!preset.empty()) {
            if (!matrix.empty() || !method.empty()) throw InvalidArgument("--preset excludes --matrix and --method");
            configs = find_preset(preset).configs;
        } else {
            if (matrix.empty() || method.empty() || !m) throw InvalidArgument("--matrix, --method and --m are required");
            ExperimentConfig c;
            c.label = label.empty() ? "run" : label;
            c.matrix = parse_matrix_source(matrix);
            c.method = parse_method(method);
            c.m = *m;
            if (!shift.empty()) c.shift = parse_shift(shift);
            c.xi = xi;
            c.rho = rho;
            if (c.method == Method::Extended && rho && !app.count("--m")) c.m = 2 * *rho - 1;
            c.vector = parse_vector_source(vector);
            c.metric = metric;
            if (outputs.empty()) {
                c.outputs = {"rule", "bounds", "F", "quadrature"};
            } else {
                c.outputs.clear();
                std::size_t start = 0;
                while (start <= outputs.size()) {
                    const auto end = outputs.find(',', start);
                    c.outputs.insert(outputs.substr(start, end == std::string::npos ? std::string::npos : end - start));
                    if (end == std::string::npos) break;
                    start = end + 1;
                }
            }
            configs.push_back(c);
        }
        const std::uint64_t s = seed ? *seed : env_seed();
        const ToleranceProfile tol = tol_file.empty() ? ToleranceProfile{} : load_tolerance_profile(tol_file);
        bool all = true;
        for (auto& c : configs) {
            if (seed || preset.empty() || std::getenv("CMSKRYLOV_SEED")) c.seed = s;
            if (no_reference) c.reference = false;
            c.tol = tol;
            const RunArtifact a = run(c);
            write_artifact(a, out);
            for (const auto& ch : a.checks)
                std::cout << fmt::format("{} {:<28} {:<5} {}\n", a.label, ch.name, ch.pass ? "ok" : "FAIL", ch.detail);
            all = all && a.pass();
        }
        return all ? 0 : 1;
    } catch (const LuckyBreakdown& e) {
        std::cerr << "error: " << e.what() << " (invariant subspace of dimension " << e.step << ")\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
