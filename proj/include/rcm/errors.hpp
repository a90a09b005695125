#pragma once

#include <stdexcept>
#include <string>

namespace rcm {

// Malformed or missing configuration input. CLI exit code 2.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A resource budget (cells, samples, box size) would be exceeded. Exit code 3.
struct budget_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The numerical problem is outside its domain of validity. Exit code 4.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace rcm
