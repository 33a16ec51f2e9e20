#include "randpv/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "randpv/config.hpp"
#include "randpv/errors.hpp"
#include "randpv/pi0.hpp"
#include "randpv/replicability.hpp"
#include "randpv/rng.hpp"

namespace randpv {

std::vector<std::size_t> bh_select(std::span<const Probability> pvalues, Probability q) {
    if (!(q > 0.0 && q < 1.0))
        throw std::domain_error("bh_select: q must lie strictly inside (0,1)");
    for (Probability p : pvalues) require_probability(p, "bh_select: p-value");

    const std::size_t m = pvalues.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return pvalues[a] < pvalues[b]; });

    std::size_t selected = 0;
    for (std::size_t k = m; k >= 1; --k) {
        if (pvalues[order[k - 1]] <= static_cast<double>(k) * q / static_cast<double>(m)) {
            selected = k;
            break;
        }
    }
    std::vector<std::size_t> indices(order.begin(), order.begin() + selected);
    std::sort(indices.begin(), indices.end());
    return indices;
}

AnalysisReport analyze(const ZScoreMatrix& matrix, const std::string& primary_study,
                       Probability q, int gamma, Probability lambda, int rand_repeats,
                       std::uint64_t seed) {
    const auto primary_it =
        std::find(matrix.study_ids.begin(), matrix.study_ids.end(), primary_study);
    if (primary_it == matrix.study_ids.end())
        throw data_error("analyze: unknown primary study '" + primary_study + "'");
    const std::size_t primary = static_cast<std::size_t>(primary_it - matrix.study_ids.begin());
    const int s = static_cast<int>(matrix.studies()) - 1;
    if (gamma < 2 || gamma > s)
        throw std::invalid_argument("analyze: need 2 <= gamma <= number of remaining studies");
    if (!(lambda >= 0.0 && lambda < 1.0))
        throw std::domain_error("analyze: lambda must lie in [0,1)");
    if (rand_repeats < 1) throw std::invalid_argument("analyze: rand_repeats must be >= 1");

    // Selection on the primary study's one-sided p-values.
    std::vector<Probability> primary_pvalues(matrix.markers());
    for (std::size_t j = 0; j < matrix.markers(); ++j)
        primary_pvalues[j] = std_normal_survival(matrix.at(primary, j));
    const std::vector<std::size_t> selected = bh_select(primary_pvalues, q);

    AnalysisReport report;
    report.q = q;
    report.gamma = gamma;
    report.selected_count = static_cast<int>(selected.size());
    report.rand_repeats = rand_repeats;
    if (selected.empty()) return report;

    // Replicability LFC p-values from the remaining studies.
    const ReplicabilityConfig config{s, gamma, 0.5};
    const Probability c = threshold_c(config);
    std::vector<Probability> lfc(selected.size());
    std::vector<Probability> per_study(static_cast<std::size_t>(s));
    for (std::size_t idx = 0; idx < selected.size(); ++idx) {
        std::size_t k = 0;
        for (std::size_t i = 0; i < matrix.studies(); ++i) {
            if (i == primary) continue;
            per_study[k++] = std_normal_survival(matrix.at(i, selected[idx]));
        }
        lfc[idx] = partial_conjunction_lfc_pvalue(per_study, config);
    }
    report.pi0_lfc = schweder_spjotvoll(lfc, lambda).value;

    // Mean and spread of the randomized estimate over the uniform redraws.
    std::vector<double> estimates(static_cast<std::size_t>(rand_repeats));
    std::vector<Probability> randomized(selected.size());
    for (int r = 0; r < rand_repeats; ++r) {
        RandomStream rng = RandomStream::for_replicate(seed, static_cast<std::uint64_t>(r));
        for (std::size_t idx = 0; idx < selected.size(); ++idx)
            randomized[idx] = randomize(lfc[idx], c, rng.uniform());
        estimates[static_cast<std::size_t>(r)] = schweder_spjotvoll(randomized, lambda).value;
    }
    double sum = 0.0;
    for (double e : estimates) sum += e;
    report.pi0_rand_mean = sum / static_cast<double>(rand_repeats);
    if (rand_repeats > 1) {
        double ss = 0.0;
        for (double e : estimates) ss += (e - report.pi0_rand_mean) * (e - report.pi0_rand_mean);
        report.pi0_rand_std = std::sqrt(ss / static_cast<double>(rand_repeats - 1));
    }
    return report;
}

namespace {

std::vector<std::string> split_row(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, sep)) fields.push_back(field);
    if (!line.empty() && line.back() == sep) fields.push_back("");
    return fields;
}

}  // namespace

ZScoreMatrix read_zscore_matrix(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw data_error("z-score table: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const char sep = line.find('\t') != std::string::npos ? '\t' : ',';

    const std::vector<std::string> header = split_row(line, sep);
    if (header.size() < 2) throw data_error("z-score table: header needs at least one study");

    ZScoreMatrix matrix;
    matrix.study_ids.assign(header.begin() + 1, header.end());

    std::vector<std::vector<double>> rows;  // marker-major while reading
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_row(line, sep);
        if (fields.size() != header.size())
            throw data_error("z-score table: row '" + fields[0] + "' has " +
                             std::to_string(fields.size() - 1) + " values, expected " +
                             std::to_string(matrix.study_ids.size()));
        matrix.marker_ids.push_back(fields[0]);
        std::vector<double> row(matrix.study_ids.size());
        for (std::size_t i = 0; i < row.size(); ++i) {
            char* end = nullptr;
            row[i] = std::strtod(fields[i + 1].c_str(), &end);
            if (end == fields[i + 1].c_str() || *end != '\0' || !std::isfinite(row[i]))
                throw data_error("z-score table: bad value '" + fields[i + 1] + "' for marker '" +
                                 fields[0] + "'");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw data_error("z-score table: no marker rows");

    matrix.z.resize(matrix.studies() * matrix.markers());
    for (std::size_t j = 0; j < matrix.markers(); ++j)
        for (std::size_t i = 0; i < matrix.studies(); ++i) matrix.at(i, j) = rows[j][i];
    return matrix;
}

ZScoreMatrix load_zscore_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("z-score table: cannot open '" + path + "'");
    return read_zscore_matrix(in);
}

void write_zscore_matrix(std::ostream& out, const ZScoreMatrix& matrix) {
    out << "marker";
    for (const std::string& id : matrix.study_ids) out << '\t' << id;
    out << '\n';
    for (std::size_t j = 0; j < matrix.markers(); ++j) {
        out << matrix.marker_ids[j];
        for (std::size_t i = 0; i < matrix.studies(); ++i)
            out << '\t' << shortest_double(matrix.at(i, j));
        out << '\n';
    }
}

std::string report_csv(const AnalysisReport& report, std::string_view provenance) {
    std::ostringstream out;
    out << "# " << provenance << "\n";
    out << "key,value\n";
    out << "q," << shortest_double(report.q) << "\n";
    out << "gamma," << report.gamma << "\n";
    out << "selected_count," << report.selected_count << "\n";
    out << "pi0_lfc," << shortest_double(report.pi0_lfc) << "\n";
    out << "pi0_rand_mean," << shortest_double(report.pi0_rand_mean) << "\n";
    out << "pi0_rand_std," << shortest_double(report.pi0_rand_std) << "\n";
    out << "rand_repeats," << report.rand_repeats << "\n";
    return out.str();
}

}  // namespace randpv
