#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace proteoknight {

// Bad or inconsistent input data (malformed files, unknown labels, too few
// records). Distinct from programming errors, which surface as
// std::invalid_argument / std::logic_error.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public DataError {
public:
    ParseError(const std::string& reason, std::size_t offset)
        : DataError(reason + " (at byte " + std::to_string(offset) + ")"), reason_(reason), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    std::string reason_;
    std::size_t offset_;
};

}  // namespace proteoknight
