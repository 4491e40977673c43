#ifndef CHANMOM_ERRORS_HPP
#define CHANMOM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace chanmom {

/// Invalid input: bad construction arguments, malformed files, wrong moment
/// orders, missing map entries. Maps to CLI exit code 2.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure: non-finite accumulation, fit that cannot be seeded.
/// Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace chanmom

#endif // CHANMOM_ERRORS_HPP
