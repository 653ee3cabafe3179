#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace adif {

enum class ErrorCode {
    Syntax,
    Arity,
    UnknownValue,
    EmptyDomain,
    PrefixViolation,
    SupportViolation,
    VariableAlreadyBound,
    FragmentViolation,
    NotASentence,
    NotPrenex,
    NotMetaPrenex,
    CyclicFunctionAssignment,
    StateSpaceBudgetExceeded,
    UnboundVariable,
    Precondition,
    Io,
};

inline std::string_view code_name(ErrorCode c) {
    switch (c) {
    case ErrorCode::Syntax: return "SyntaxError";
    case ErrorCode::Arity: return "ArityMismatch";
    case ErrorCode::UnknownValue: return "UnknownValue";
    case ErrorCode::EmptyDomain: return "EmptyDomain";
    case ErrorCode::PrefixViolation: return "PrefixViolation";
    case ErrorCode::SupportViolation: return "SupportViolation";
    case ErrorCode::VariableAlreadyBound: return "VariableAlreadyBound";
    case ErrorCode::FragmentViolation: return "FragmentViolation";
    case ErrorCode::NotASentence: return "NotASentence";
    case ErrorCode::NotPrenex: return "NotPrenex";
    case ErrorCode::NotMetaPrenex: return "NotMetaPrenex";
    case ErrorCode::CyclicFunctionAssignment: return "CyclicFunctionAssignment";
    case ErrorCode::StateSpaceBudgetExceeded: return "StateSpaceBudgetExceeded";
    case ErrorCode::UnboundVariable: return "UnboundVariable";
    case ErrorCode::Precondition: return "PreconditionViolation";
    case ErrorCode::Io: return "IoError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg)
        : std::runtime_error(std::string(code_name(code)) + ": " + msg), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
    throw Error(code, msg);
}

} // namespace adif
