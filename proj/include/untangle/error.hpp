#ifndef UNTANGLE_ERROR_HPP
#define UNTANGLE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace untangle {

enum class ErrorCode {
    SharedEndpoint,
    DegenerateTriangle,
    NotCrossing,
    NotRedOnLine,
    TiedBlueHeights,
    SegmentStillCrossing,
    SplitAmbiguous,
    BudgetExhausted,
    LineNotAbove,
    NotAKPair,
    ProjectedTie,
    SpectatorIsFlipping,
    NoValidChoice,
    PerturbationChangedStates,
    WrongPointSet,
    UnclassifiableCrossing,
    ScriptInvalidated,
    DegenerateRectangle,
    ConstraintUnsatisfied,
    AssemblyAuditFailed,
    InvalidArgument,
    ParseError,
};

inline const char* to_string(ErrorCode c)
{
    switch (c) {
    case ErrorCode::SharedEndpoint: return "SharedEndpoint";
    case ErrorCode::DegenerateTriangle: return "DegenerateTriangle";
    case ErrorCode::NotCrossing: return "NotCrossing";
    case ErrorCode::NotRedOnLine: return "NotRedOnLine";
    case ErrorCode::TiedBlueHeights: return "TiedBlueHeights";
    case ErrorCode::SegmentStillCrossing: return "SegmentStillCrossing";
    case ErrorCode::SplitAmbiguous: return "SplitAmbiguous";
    case ErrorCode::BudgetExhausted: return "BudgetExhausted";
    case ErrorCode::LineNotAbove: return "LineNotAbove";
    case ErrorCode::NotAKPair: return "NotAKPair";
    case ErrorCode::ProjectedTie: return "ProjectedTie";
    case ErrorCode::SpectatorIsFlipping: return "SpectatorIsFlipping";
    case ErrorCode::NoValidChoice: return "NoValidChoice";
    case ErrorCode::PerturbationChangedStates: return "PerturbationChangedStates";
    case ErrorCode::WrongPointSet: return "WrongPointSet";
    case ErrorCode::UnclassifiableCrossing: return "UnclassifiableCrossing";
    case ErrorCode::ScriptInvalidated: return "ScriptInvalidated";
    case ErrorCode::DegenerateRectangle: return "DegenerateRectangle";
    case ErrorCode::ConstraintUnsatisfied: return "ConstraintUnsatisfied";
    case ErrorCode::AssemblyAuditFailed: return "AssemblyAuditFailed";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace untangle

#endif
