#pragma once

#include <stdexcept>
#include <string>

namespace loopalg {

// Every failure raised by the library derives from Error so callers can catch
// one type; the CLI maps the concrete kinds to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidInverse : public Error {
public:
    InvalidInverse() : Error("inverse of zero") {}
};

class FieldMismatch : public Error {
public:
    explicit FieldMismatch(const std::string& what) : Error("field mismatch: " + what) {}
};

class ShapeError : public Error {
public:
    explicit ShapeError(const std::string& what) : Error("shape error: " + what) {}
};

class NotAComplex : public Error {
public:
    explicit NotAComplex(const std::string& what) : Error("not a complex: " + what) {}
};

class NotACycle : public Error {
public:
    explicit NotACycle(const std::string& what) : Error("not a cycle: " + what) {}
};

class WindowExceeded : public Error {
public:
    explicit WindowExceeded(const std::string& what) : Error("window exceeded: " + what) {}
};

class NotSupported : public Error {
public:
    explicit NotSupported(const std::string& what) : Error("not supported: " + what) {}
};

class BimoduleError : public Error {
public:
    explicit BimoduleError(const std::string& what) : Error("bimodule error: " + what) {}
};

// Broken internal identity (sign convention, chain map). Never a user error.
class InternalError : public Error {
public:
    explicit InternalError(const std::string& what) : Error("internal error: " + what) {}
};

class ConstructionError : public Error {
public:
    enum class Kind {
        dimension_mismatch,
        not_commutative,
        not_poincare,
        nonzero_differential,
        dimension_too_small,
        unknown_example,
        invalid_argument,
    };
    ConstructionError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

class ParseError : public Error {
public:
    enum class Kind {
        malformed_json,
        schema,
        unknown_label,
        duplicate_label,
        not_prime,
        bad_scalar,
    };
    ParseError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

}  // namespace loopalg
