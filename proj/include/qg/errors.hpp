#ifndef QG_ERRORS_HPP
#define QG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qg {

// Exit-code contract: 0 success, 2 validation, 3 numerical, 4 precondition.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// A theorem hypothesis failed (asymmetric potential with a delta family,
// vertex unitaries with more than one non-trivial eigenvalue, ...).
struct PreconditionError : std::runtime_error {
    explicit PreconditionError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace qg

#endif
