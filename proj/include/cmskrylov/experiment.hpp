#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cmskrylov/common.hpp"

namespace cmskrylov {

enum class Method { Poly, QorPoly, SaiReal, SaiComplex, QorSai, Extended };

std::string to_string(Method m);
Method parse_method(const std::string& name);

// "laplacian:N", "diag:LO:HI" (integer range), "diag:v1,v2,...", "mtx:PATH"
struct MatrixSource {
    enum class Type { Laplacian, Diagonal, MatrixMarket };
    Type type = Type::Laplacian;
    int n = 0;
    std::vector<double> diagonal;
    std::string path;
    std::string spec;
};

MatrixSource parse_matrix_source(const std::string& spec);

// "random", "ones" or "file:PATH" (one entry per line, "re [im]")
struct VectorSource {
    enum class Type { Random, Ones, File };
    Type type = Type::Random;
    std::string path;
    std::string spec = "random";
};

VectorSource parse_vector_source(const std::string& spec);

// Known output names: rule, bounds, F, Fs, stepfuncs, quadrature, omega.
const std::set<std::string>& known_outputs();

struct ExperimentConfig {
    std::string label = "run";
    MatrixSource matrix;
    std::string metric = "identity";  // or "mtx:PATH"
    VectorSource vector;
    Method method = Method::Poly;
    int m = 10;
    std::optional<cplx> shift;
    std::optional<double> xi;
    std::optional<int> rho;
    std::uint64_t seed = 1;
    std::set<std::string> outputs{"rule", "bounds", "F", "quadrature"};
    bool reference = true;
    ToleranceProfile tol;
};

// Throws InvalidArgument on inconsistent method/pole/dimension settings.
void validate(const ExperimentConfig& c);

struct Preset {
    std::string name;
    std::string description;
    std::vector<ExperimentConfig> configs;
};

const std::vector<Preset>& list_presets();
const Preset& find_preset(const std::string& name);

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct RunArtifact {
    std::string label;
    std::string json;                          // pretty-printed, one "generated_at" line
    std::map<std::string, std::string> csv;    // file suffix → contents
    std::vector<Check> checks;
    bool pass() const;
};

RunArtifact run(const ExperimentConfig& config);

// Writes <dir>/<label>.json and <dir>/<label>_<suffix>.csv.
void write_artifact(const RunArtifact& a, const std::string& dir);

// JSON object whose keys override fields of the default profile.
ToleranceProfile load_tolerance_profile(const std::string& path);

// Removes the line carrying the timestamp field.
std::string strip_timestamp(const std::string& json);

}  // namespace cmskrylov
