#pragma once

#include <stdexcept>
#include <string>

namespace randpv {

/// Malformed or unreadable input data (files, tables, configuration).
struct data_error : std::runtime_error {
    explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

/// Sample cannot support the requested statistic (e.g. zero variance).
struct degenerate_sample_error : std::domain_error {
    explicit degenerate_sample_error(const std::string& what) : std::domain_error(what) {}
};

}  // namespace randpv
