#pragma once

#include "henon/params.hpp"

#include <json.hpp>

#include <cstdint>
#include <string_view>
#include <vector>

namespace henon {

enum class SyncLabel { Positive, SemiTrivial, Trivial };

std::string_view to_string(SyncLabel label);

/// A solution (c_1, ..., c_k) of sum_j kappa_ij c_i^{alpha_ij-1} c_j^{beta_ij} = c_i.
struct SyncConstants {
    std::vector<double> c;
    double residual = 0.0;
    SyncLabel label = SyncLabel::Positive;
    int branch = -1;       ///< k = 2: index of the root L among ascending roots; -1 otherwise
    double ratio = 0.0;    ///< k = 2: L = c_1 / c_2 (0 when c_2 = 0)
};

/// f(t) = t^{p-2} + nu alpha t^{alpha-2} - 1 - nu beta t^alpha. DomainError for t <= 0.
double scalar_reduction_f(const ProblemParams& params, double t);

struct ReductionRoots {
    std::vector<double> roots;       ///< sign changes of f, refined to 1e-14 relative
    std::vector<double> tangencies;  ///< touching zeros without a sign change (warnings only)
};

/// Log-uniform scan of f over [1e-8, 1e8] with grid_points nodes, then bracketed refinement.
ReductionRoots scalar_reduction_roots(const ProblemParams& params, std::size_t grid_points = 100000);

/// Every positive root from the scalar reduction followed by the semi-trivial
/// pairs (1, 0) and (0, 1). Each pair is polished by Newton on the 2x2 system.
std::vector<SyncConstants> solve_sync_2(const ProblemParams& params);

/// The positive entries of roots; NoPositiveRoot if there are none.
std::vector<SyncConstants> require_positive_root(const std::vector<SyncConstants>& roots);

/// Max over i of |sum_j kappa_ij c_i^{alpha_ij-1} c_j^{beta_ij} - c_i|.
double sync_residual(const CouplingSpec& spec, const std::vector<double>& c);
double sync_residual(const ProblemParams& params, double c1, double c2);

SyncLabel classify_sync(const std::vector<double>& c);

/// Damped Newton in log variables from the symmetric point and `starts` random
/// positive points drawn from a seeded generator. Results are deduplicated at
/// 1e-9 in max norm, filtered by residual < 1e-10 and sorted lexicographically,
/// so the output does not depend on the number of worker threads.
std::vector<SyncConstants> solve_sync_k(const CouplingSpec& spec, int starts, std::uint64_t seed = 1,
                                        int threads = 1);

/// Newton polish of a positive root estimate; returns c unchanged if Newton fails.
std::vector<double> polish_sync_root(const CouplingSpec& spec, std::vector<double> c);

nlohmann::json to_json(const SyncConstants& sc);

}  // namespace henon
