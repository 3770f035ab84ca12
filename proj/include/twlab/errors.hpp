#pragma once

#include <stdexcept>
#include <string>

namespace twlab {

enum class Errc {
    Domain = 1,
    NewtonDivergence,
    BadInterval,
    OutOfRange,
    PoleEncountered,
    StepFailure,
    BlowUp,
    DegenerateQ2,
    DegenerateDenominator,
    DegenerateGauge,
    MatchFailure,
    QZeroCrossing,
    QuadratureFailure,
    NonConvergence,
    IllConditionedFit,
    OutOfSupportedRange,
    EigenFailure,
    FredholmFailure,
    UnknownSeries,
    OrderTooHigh,
    ParseError,
    Io,
    Internal
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& msg)
        : std::runtime_error(msg), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

// ParseError carries the location of the offending token.
class ParseError : public Error {
public:
    ParseError(int line, int column, const std::string& msg)
        : Error(Errc::ParseError, "line " + std::to_string(line) + ", column " +
                                      std::to_string(column) + ": " + msg),
          line_(line), column_(column) {}
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

[[noreturn]] inline void fail(Errc c, const std::string& msg) { throw Error(c, msg); }

}  // namespace twlab
