#ifndef TERMTOPICS_ERRORS_HPP
#define TERMTOPICS_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace termtopics {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A corpus file line could not be parsed. Carries the 1-based line number.
class IngestError : public Error {
public:
    IngestError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

/// Unknown term, document, topic or id.
class LookupError : public Error {
public:
    using Error::Error;
};

class NotFoundError : public LookupError {
public:
    using LookupError::LookupError;
};

class ConflictError : public Error {
public:
    using Error::Error;
};

/// Iterative method failed to converge; `residual()` is the last residual.
class NumericalError : public Error {
public:
    NumericalError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// A document whose transition matrix is undefined (no idf mass at all).
class DegenerateDocumentError : public Error {
public:
    using Error::Error;
};

} // namespace termtopics

#endif // TERMTOPICS_ERRORS_HPP
