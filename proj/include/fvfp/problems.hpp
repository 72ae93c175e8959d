#pragma once

#include "fvfp/problem.hpp"

#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace fvfp {

struct Problem1D {
    ProblemSpec1D spec;
    int default_n = 0;
    std::string default_scheme = "first";
    std::string default_tau_rule = "fixed";  // fixed | ch | ch2
    double default_tau = 0.0;                // value, or coefficient of h / h^2
    double default_t_end = 0.0;
    std::vector<double> default_snapshots;
    std::function<double(double, double)> exact;  // exact(x,t); null if none
};

struct Problem2D {
    ProblemSpec2D spec;
    int default_nx = 0, default_ny = 0;
    std::string default_scheme = "first";
    std::string default_tau_rule = "fixed";
    double default_tau = 0.0;
    double default_t_end = 0.0;
    std::vector<double> default_snapshots;
    std::function<double(double, double, double)> exact;  // exact(x,y,t)
};

struct BuiltinProblem {
    std::string id;
    std::string summary;
    std::variant<Problem1D, Problem2D> def;

    bool is_2d() const { return std::holds_alternative<Problem2D>(def); }
};

// Benchmark catalog: accuracy1d, fokker_planck, doi_onsager_a3/_a5,
// accuracy2d, keller_segel_sub/_super.
const std::vector<BuiltinProblem>& builtin_problems();
const BuiltinProblem& find_problem(const std::string& id);  // throws if unknown

}  // namespace fvfp
