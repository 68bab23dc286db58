#pragma once

#include "magent/core/outcome.hpp"
#include "magent/core/types.hpp"

#include <json.hpp>

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace magent {

class AgentContext;
class BehaviorCodec;

/// A resumable unit of agent activity, stepped cooperatively by the platform.
///
/// Subclasses implement `do_step` and `save_fields`. Everything a behavior needs to
/// resume after migration must be written by `save_fields` and read back by the loader
/// registered with the BehaviorCodec under `kind()`.
class Behavior
{
public:
    virtual ~Behavior() = default;

    /// Advances the behavior by one quantum. Throws Errc::SteppingDone once Done was returned.
    StepOutcome step(AgentContext& ctx);

    bool done() const noexcept { return done_; }

    virtual std::string_view kind() const = 0;
    virtual std::unique_ptr<Behavior> clone() const = 0;

    /// {"kind": ..., "done": ..., <fields>}.
    nlohmann::json save() const;

protected:
    Behavior() = default;
    Behavior(const Behavior&) = default;
    Behavior& operator=(const Behavior&) = default;

    virtual StepOutcome do_step(AgentContext& ctx) = 0;
    virtual void save_fields(nlohmann::json& out) const = 0;

private:
    friend class BehaviorCodec;
    bool done_ = false;
};

using BehaviorPtr = std::unique_ptr<Behavior>;

bool same_state(const Behavior& a, const Behavior& b);

/// Resolves references found in behavior JSON. Locations and agents may be written as
/// numeric ids or, when a resolver is installed, by name.
struct LoadContext
{
    const BehaviorCodec* codec = nullptr;
    std::function<LocationId(const nlohmann::json&)> resolve_location;
    std::function<AgentId(const nlohmann::json&)> resolve_agent;

    LocationId location(const nlohmann::json& j) const;
    AgentId agent(const nlohmann::json& j) const;
    std::unique_ptr<Behavior> behavior(const nlohmann::json& j) const;
};

/// kind name -> loader. The same JSON shape serves as construction spec (state fields
/// omitted) and as migration snapshot (state fields present).
class BehaviorCodec
{
public:
    using Loader = std::function<BehaviorPtr(const nlohmann::json&, const LoadContext&)>;

    void add(std::string kind, Loader loader);
    bool knows(std::string_view kind) const;
    std::vector<std::string> kinds() const;

    /// Throws Errc::UnknownBehaviorKind, or Errc::Serialization for malformed input.
    BehaviorPtr load(const nlohmann::json& j, const LoadContext& ctx) const;

private:
    std::map<std::string, Loader, std::less<>> loaders_;
};

} // namespace magent
