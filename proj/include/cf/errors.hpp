#pragma once

#include <stdexcept>
#include <string>

namespace cf {

// Domain error; `kind` is a stable identifier such as "Degenerate".
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

}  // namespace cf
