#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace aircast {

// Base error. The three categories below map onto CLI exit codes:
// ConfigError -> 2, DataError -> 3, FitError -> 4.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : Error {
    using Error::Error;
};
struct DataError : Error {
    using Error::Error;
};
struct FitError : Error {
    using Error::Error;
};

// --- data ingestion / preparation ---

struct MissingColumn : DataError {
    explicit MissingColumn(const std::string& name)
        : DataError("missing or misnamed column: " + name), column(name) {}
    std::string column;
};

struct NonNumericCell : DataError {
    NonNumericCell(std::size_t r, std::size_t c)
        : DataError("non-numeric cell at row " + std::to_string(r) + ", column " +
                    std::to_string(c)),
          row(r), col(c) {}
    std::size_t row, col;
};

struct DichotomousOutOfRange : DataError {
    DichotomousOutOfRange(std::size_t r, std::size_t c)
        : DataError("dichotomous value outside {0,1} at row " + std::to_string(r) +
                    ", column " + std::to_string(c)),
          row(r), col(c) {}
    std::size_t row, col;
};

struct EmptyFile : DataError {
    explicit EmptyFile(const std::string& path) : DataError("no data rows in " + path) {}
};

struct BadProportions : ConfigError {
    using ConfigError::ConfigError;
};

struct ZeroVarianceColumn : DataError {
    explicit ZeroVarianceColumn(const std::string& name)
        : DataError("continuous column has zero variance over training rows: " + name),
          column(name) {}
    std::string column;
};

// --- model fitting ---

struct BadConfig : ConfigError {
    using ConfigError::ConfigError;
};

struct TooFewRows : FitError {
    using FitError::FitError;
};

struct RankDeficient : FitError {
    using FitError::FitError;
};

struct Diverged : FitError {
    using FitError::FitError;
};

struct NotConverged : FitError {
    NotConverged(const std::string& what, std::size_t violations)
        : FitError(what + " (" + std::to_string(violations) + " KKT violations remain)"),
          kkt_violations(violations) {}
    std::size_t kkt_violations;
};

struct AllRulesSilent : FitError {
    using FitError::FitError;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

// --- statistics ---

struct DomainError : Error {
    using Error::Error;
};

struct LengthMismatch : Error {
    using Error::Error;
};

struct EmptyInput : Error {
    using Error::Error;
};

struct ZeroVariance : Error {
    using Error::Error;
};

struct NonpositiveReference : Error {
    using Error::Error;
};

struct TooFewGroups : Error {
    using Error::Error;
};

struct TooFewValues : Error {
    using Error::Error;
};

struct DegenerateSample : Error {
    using Error::Error;
};

// --- reporting ---

struct IoError : Error {
    using Error::Error;
};

}  // namespace aircast
