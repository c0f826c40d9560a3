#pragma once

#include <stdexcept>
#include <string>

namespace qrem {

// Base for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or inconsistent input (bad file, width mismatch, bad parameter). Exit code 2.
struct InputError : Error {
    using Error::Error;
};

// A configured resource cap would be exceeded. Exit code 3.
struct CapError : Error {
    using Error::Error;
};

// Numerical degeneracy (singular calibration, unsatisfiable constraint). Exit code 4.
struct DegenerateError : Error {
    using Error::Error;
};

}  // namespace qrem
