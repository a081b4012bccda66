#pragma once

#include <stdexcept>
#include <string>

namespace ringworm {

// Malformed or unreadable input data (PGM streams, CSV files, manifests).
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// A classifier could not be trained (degenerate data, failed convergence).
struct TrainError : std::runtime_error {
    explicit TrainError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace ringworm
