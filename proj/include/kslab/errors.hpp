#pragma once

#include <stdexcept>
#include <string>

namespace kslab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// malformed input text (JSON syntax, unparsable rational, ...)
struct ParseError : Error {
    using Error::Error;
};

// structurally valid input that breaks a domain rule; `field` names the offender,
// e.g. "terms[0].atoms[1].out"
struct ValidationError : Error {
    std::string field;
    ValidationError(std::string field_, const std::string& what_)
        : Error(field_.empty() ? what_ : field_ + ": " + what_), field(std::move(field_)) {}
};

} // namespace kslab
