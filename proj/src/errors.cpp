#include "twlab/errors.hpp"

namespace twlab {

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::Domain: return "DomainError";
        case Errc::NewtonDivergence: return "NewtonDivergence";
        case Errc::BadInterval: return "BadInterval";
        case Errc::OutOfRange: return "OutOfRange";
        case Errc::PoleEncountered: return "PoleEncountered";
        case Errc::StepFailure: return "StepFailure";
        case Errc::BlowUp: return "BlowUp";
        case Errc::DegenerateQ2: return "DegenerateQ2";
        case Errc::DegenerateDenominator: return "DegenerateDenominator";
        case Errc::DegenerateGauge: return "DegenerateGauge";
        case Errc::MatchFailure: return "MatchFailure";
        case Errc::QZeroCrossing: return "QZeroCrossing";
        case Errc::QuadratureFailure: return "QuadratureFailure";
        case Errc::NonConvergence: return "NonConvergence";
        case Errc::IllConditionedFit: return "IllConditionedFit";
        case Errc::OutOfSupportedRange: return "OutOfSupportedRange";
        case Errc::EigenFailure: return "EigenFailure";
        case Errc::FredholmFailure: return "FredholmFailure";
        case Errc::UnknownSeries: return "UnknownSeries";
        case Errc::OrderTooHigh: return "OrderTooHigh";
        case Errc::ParseError: return "ParseError";
        case Errc::Io: return "IoError";
        case Errc::Internal: return "InternalError";
    }
    return "Unknown";
}

}  // namespace twlab
