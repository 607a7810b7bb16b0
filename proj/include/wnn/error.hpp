#ifndef WNN_ERROR_HPP
#define WNN_ERROR_HPP

#include <stdexcept>
#include <string>

/**
 * @file error.hpp
 *
 * @brief Exception type shared by all modules.
 */

namespace wnn {

/**
 * Broad failure category. The command-line front-end maps each category to a
 * distinct exit code.
 */
enum class ErrorKind {
    invalid_argument, ///< Bad parameter or precondition violation.
    io,               ///< File could not be read or written.
    data,             ///< Input data breaks a dataset invariant.
    assertion         ///< An internal postcondition did not hold.
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

namespace internal {

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

inline void require(bool condition, const std::string& message) {
    if (!condition) {
        throw Error(ErrorKind::invalid_argument, message);
    }
}

}

}

#endif
