#ifndef NUTAXIS_ERRORS_HPP
#define NUTAXIS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nutaxis {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters, geometry or configuration.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A field that must be strictly positive (u, v, or w under a logarithm) is not.
class NonpositiveField : public Error {
public:
    NonpositiveField(std::string field, long cell)
        : Error("nonpositive field '" + field + "' at cell " + std::to_string(cell)),
          field_(std::move(field)), cell_(cell) {}

    const std::string& field() const { return field_; }
    long cell() const { return cell_; }

private:
    std::string field_;
    long cell_;
};

/// Step rejected repeatedly because u or w left the admissible range.
class PositivityViolation : public Error {
public:
    PositivityViolation(std::string field, long cell, double t)
        : Error("positivity violation in '" + field + "' at cell " + std::to_string(cell) +
                " (t = " + std::to_string(t) + ")"),
          field_(std::move(field)), cell_(cell), time_(t) {}

    const std::string& field() const { return field_; }
    long cell() const { return cell_; }
    double time() const { return time_; }

private:
    std::string field_;
    long cell_;
    double time_;
};

class LinearSolveFailure : public Error {
public:
    using Error::Error;
};

class HorizonTooShort : public Error {
public:
    using Error::Error;
};

class UnknownVariant : public Error {
public:
    using Error::Error;
};

/// Schema or I/O failure while reading or writing run files.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace nutaxis

#endif  // NUTAXIS_ERRORS_HPP
