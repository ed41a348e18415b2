#ifndef ECRCF_ERROR_HPP
#define ECRCF_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ecrcf
{

enum class ErrorKind {
    IndeterminateAtHorizon,
    DivisionByZero,
    NegativeRadicand,
    NotFinite,
    DenominatorCapExceeded,
    ExponentOverflow,
    InvalidCurve,
    DegenerateRoots,
    NotOnCurve,
    NotOnComponent,
    HalvingFailed,
    SingularOperand,
    WrongCase,
    InvalidTruncationPoint,
    InvalidArgument,
    ParseError,
    UnknownSuite,
};

inline const char *to_string(ErrorKind k) noexcept
{
    switch (k) {
        case ErrorKind::IndeterminateAtHorizon:
            return "IndeterminateAtHorizon";
        case ErrorKind::DivisionByZero:
            return "DivisionByZero";
        case ErrorKind::NegativeRadicand:
            return "NegativeRadicand";
        case ErrorKind::NotFinite:
            return "NotFinite";
        case ErrorKind::DenominatorCapExceeded:
            return "DenominatorCapExceeded";
        case ErrorKind::ExponentOverflow:
            return "ExponentOverflow";
        case ErrorKind::InvalidCurve:
            return "InvalidCurve";
        case ErrorKind::DegenerateRoots:
            return "DegenerateRoots";
        case ErrorKind::NotOnCurve:
            return "NotOnCurve";
        case ErrorKind::NotOnComponent:
            return "NotOnComponent";
        case ErrorKind::HalvingFailed:
            return "HalvingFailed";
        case ErrorKind::SingularOperand:
            return "SingularOperand";
        case ErrorKind::WrongCase:
            return "WrongCase";
        case ErrorKind::InvalidTruncationPoint:
            return "InvalidTruncationPoint";
        case ErrorKind::InvalidArgument:
            return "InvalidArgument";
        case ErrorKind::ParseError:
            return "ParseError";
        case ErrorKind::UnknownSuite:
            return "UnknownSuite";
    }
    return "Unknown";
}

// All library failures are reported through this exception; the kind is the
// machine-readable part, the message is for humans.
class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string &msg)
        : std::runtime_error(std::string(to_string(kind)) + ": " + msg), m_kind(kind)
    {
    }

    ErrorKind kind() const noexcept
    {
        return m_kind;
    }

private:
    ErrorKind m_kind;
};

class ParseError : public Error
{
public:
    ParseError(std::size_t offset, std::vector<std::string> expected, const std::string &msg)
        : Error(ErrorKind::ParseError, "at offset " + std::to_string(offset) + ": " + msg), m_offset(offset),
          m_expected(std::move(expected))
    {
    }

    std::size_t offset() const noexcept
    {
        return m_offset;
    }
    const std::vector<std::string> &expected() const noexcept
    {
        return m_expected;
    }

private:
    std::size_t m_offset;
    std::vector<std::string> m_expected;
};

namespace detail
{

[[noreturn]] inline void indeterminate(const std::string &what)
{
    throw Error(ErrorKind::IndeterminateAtHorizon, what);
}

} // namespace detail

} // namespace ecrcf

#endif
