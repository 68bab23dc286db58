#include "magent/core/error.hpp"

namespace magent {

std::string_view errc_name(Errc code) noexcept
{
    switch (code)
    {
    case Errc::SteppingDone: return "SteppingDone";
    case Errc::EmptyTypeTag: return "EmptyTypeTag";
    case Errc::DuplicateLocationName: return "DuplicateLocationName";
    case Errc::UnknownLocation: return "UnknownLocation";
    case Errc::UnknownAgent: return "UnknownAgent";
    case Errc::AlreadyMigrating: return "AlreadyMigrating";
    case Errc::ZeroPeriod: return "ZeroPeriod";
    case Errc::NoCallbacks: return "NoCallbacks";
    case Errc::InvalidTimeout: return "InvalidTimeout";
    case Errc::UnknownRole: return "UnknownRole";
    case Errc::RoleConflict: return "RoleConflict";
    case Errc::UnknownAction: return "UnknownAction";
    case Errc::UnknownBehaviorKind: return "UnknownBehaviorKind";
    case Errc::ReorderStartedChild: return "ReorderStartedChild";
    case Errc::InvalidFsm: return "InvalidFsm";
    case Errc::EmptyRoute: return "EmptyRoute";
    case Errc::InvalidObjective: return "InvalidObjective";
    case Errc::InvalidLatency: return "InvalidLatency";
    case Errc::InvalidTest: return "InvalidTest";
    case Errc::UnknownQuestionId: return "UnknownQuestionId";
    case Errc::MalformedRepository: return "MalformedRepository";
    case Errc::MalformedEnvelope: return "MalformedEnvelope";
    case Errc::InvalidScript: return "InvalidScript";
    case Errc::Serialization: return "Serialization";
    case Errc::FileNotFound: return "FileNotFound";
    case Errc::ParseError: return "ParseError";
    }
    return "Unknown";
}

} // namespace magent
