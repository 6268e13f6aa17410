#pragma once

#include <stdexcept>
#include <string>

namespace crepair {

/// Base error; `code()` is a stable machine-readable identifier that also
/// lands in run manifests.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

struct DimensionError : Error {
    explicit DimensionError(const std::string& what) : Error("dimension", what) {}
};

struct OutOfDomainError : Error {
    explicit OutOfDomainError(const std::string& what) : Error("out_of_domain", what) {}
};

struct IndexError : Error {
    explicit IndexError(const std::string& what) : Error("index", what) {}
};

struct GridMismatchError : Error {
    explicit GridMismatchError(const std::string& what) : Error("grid_mismatch", what) {}
};

struct EncodingError : Error {
    explicit EncodingError(const std::string& what) : Error("encoding", what) {}
};

struct RefinementBudgetError : Error {
    explicit RefinementBudgetError(const std::string& what) : Error("refinement_budget", what) {}
};

struct EnumerationBudgetError : Error {
    explicit EnumerationBudgetError(const std::string& what) : Error("enumeration_budget", what) {}
};

struct NumericDivergenceError : Error {
    explicit NumericDivergenceError(const std::string& what) : Error("numeric_divergence", what) {}
};

struct ContractError : Error {
    explicit ContractError(const std::string& what) : Error("contract", what) {}
};

struct IncompatibilityError : Error {
    explicit IncompatibilityError(const std::string& what) : Error("incompatible", what) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error("config", what) {}
};

struct IoError : Error {
    explicit IoError(const std::string& what) : Error("io", what) {}
};

} // namespace crepair
