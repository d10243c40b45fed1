#ifndef RELTIME_ERRORS_HPP
#define RELTIME_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace reltime {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// All four slider values are equal; the annotation carries no usable signal.
class DegenerateSliders : public Error {
public:
    explicit DegenerateSliders(const std::string& what = "all slider values are equal")
        : Error(what) {}
};

// An argument is outside the mathematical domain of the operation.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(what) {}
};

// Input is too small or constant where variation is required (rank statistics).
class DegenerateInput : public Error {
public:
    explicit DegenerateInput(const std::string& what) : Error(what) {}
};

// An assignment does not hold exactly five annotations.
class MalformedAssignment : public Error {
public:
    explicit MalformedAssignment(const std::string& what) : Error(what) {}
};

// A record violates the annotation schema. Carries the 1-based line number
// and the offending field where known.
class SchemaError : public Error {
public:
    SchemaError(std::size_t line, std::string field, const std::string& what)
        : Error("line " + std::to_string(line) + ", field '" + field + "': " + what),
          line_(line),
          field_(std::move(field)) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    std::size_t line_;
    std::string field_;
};

// The pairwise observation graph does not connect all predicates.
class NotConnected : public Error {
public:
    explicit NotConnected(const std::string& what) : Error(what) {}
};

// Covariance whitening failed even after ridge regularization.
class SingularCovariance : public Error {
public:
    explicit SingularCovariance(const std::string& what) : Error(what) {}
};

// A sentence holds no predicate roots.
class NoPredicates : public Error {
public:
    explicit NoPredicates(const std::string& what = "sentence has no predicates")
        : Error(what) {}
};

// A gradient-check point sits too close to an L1 kink or a min/max tie.
class KinkNearby : public Error {
public:
    explicit KinkNearby(const std::string& what) : Error(what) {}
};

}  // namespace reltime

#endif  // RELTIME_ERRORS_HPP
