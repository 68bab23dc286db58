#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace magent {

enum class Errc
{
    SteppingDone,
    EmptyTypeTag,
    DuplicateLocationName,
    UnknownLocation,
    UnknownAgent,
    AlreadyMigrating,
    ZeroPeriod,
    NoCallbacks,
    InvalidTimeout,
    UnknownRole,
    RoleConflict,
    UnknownAction,
    UnknownBehaviorKind,
    ReorderStartedChild,
    InvalidFsm,
    EmptyRoute,
    InvalidObjective,
    InvalidLatency,
    InvalidTest,
    UnknownQuestionId,
    MalformedRepository,
    MalformedEnvelope,
    InvalidScript,
    Serialization,
    FileNotFound,
    ParseError,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error
{
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code)
    {
    }

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace magent
