#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace posboot {

/// Base for every error raised by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input (files, records, parameters).
class input_error : public error {
public:
    using error::error;
};

/// A ledger record that cannot be applied. `index` is the 0-based record position.
class ledger_error : public input_error {
public:
    ledger_error(std::size_t index, const std::string& what)
        : input_error("record " + std::to_string(index) + ": " + what), index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// The scaled-stake normalisation sum vanishes, so beta is undefined.
class degenerate_profile_error : public error {
public:
    using error::error;
};

/// A formula or check is undefined for the given (otherwise well-formed) inputs.
class domain_error : public error {
public:
    using error::error;
};

}  // namespace posboot
