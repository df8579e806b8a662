#pragma once

#include <stdexcept>
#include <string>

namespace idearel {

// Raised for malformed input files, inconsistent data, and contract
// violations detected at runtime. Precondition failures on numeric
// arguments use std::invalid_argument instead.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An Error tagged with the pipeline stage that produced it.
class StageError : public Error {
public:
    StageError(std::string stage, const std::string& what)
        : Error("[" + stage + "] " + what), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

}  // namespace idearel
