#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "randpv/numerics.hpp"

namespace randpv {

/// Z-scores of marker/study pairs, one fixed association direction.
/// Stored study-major: z[study * markers + marker].
struct ZScoreMatrix {
    std::vector<std::string> marker_ids;
    std::vector<std::string> study_ids;
    std::vector<double> z;

    std::size_t studies() const { return study_ids.size(); }
    std::size_t markers() const { return marker_ids.size(); }
    double at(std::size_t study, std::size_t marker) const {
        return z[study * markers() + marker];
    }
    double& at(std::size_t study, std::size_t marker) { return z[study * markers() + marker]; }
};

/// Replicability analysis summary: selection level and count, the one-shot
/// LFC-based pi0 estimate, and mean/std of the randomized estimate over the
/// uniform redraws.
struct AnalysisReport {
    Probability q = 0.2;
    int gamma = 2;
    int selected_count = 0;
    double pi0_lfc = 0.0;
    double pi0_rand_mean = 0.0;
    double pi0_rand_std = 0.0;
    int rand_repeats = 0;
};

/// Benjamini-Hochberg step-up selection at level q: the largest k with
/// p_(k) <= k*q/m wins and the indices of the k smallest p-values are
/// returned (ascending), empty if no k qualifies.
std::vector<std::size_t> bh_select(std::span<const Probability> pvalues, Probability q);

/// The full pipeline: one-sided p-values 1 - Phi(z) in the primary study,
/// BH selection at q, partial-conjunction LFC p-values for the selected
/// markers from the remaining studies (d = 1/2), then the pi0 estimates at
/// the tuning parameter lambda. The randomized estimate is averaged over
/// rand_repeats independent uniform redraws with the data held fixed;
/// repeat r uses the stream derived from (seed, r).
AnalysisReport analyze(const ZScoreMatrix& matrix, const std::string& primary_study,
                       Probability q, int gamma, Probability lambda, int rand_repeats,
                       std::uint64_t seed);

/// Tab- or comma-separated table: header "marker<TAB>study...", one row per
/// marker. Values are written shortest-round-trip, so write-then-read
/// reproduces the matrix exactly.
ZScoreMatrix read_zscore_matrix(std::istream& in);
ZScoreMatrix load_zscore_matrix(const std::string& path);
void write_zscore_matrix(std::ostream& out, const ZScoreMatrix& matrix);

/// Key,value CSV rendering of the report with a provenance comment line.
std::string report_csv(const AnalysisReport& report, std::string_view provenance);

}  // namespace randpv
