#include "magent/core/behavior.hpp"

#include "magent/core/error.hpp"

namespace magent {

StepOutcome Behavior::step(AgentContext& ctx)
{
    if (done_)
    {
        throw Error(Errc::SteppingDone, std::string(kind()) + " stepped after Done");
    }
    StepOutcome outcome = do_step(ctx);
    if (outcome.is_done())
    {
        done_ = true;
    }
    return outcome;
}

nlohmann::json Behavior::save() const
{
    nlohmann::json out = nlohmann::json::object();
    save_fields(out);
    out["kind"] = std::string(kind());
    out["done"] = done_;
    return out;
}

bool same_state(const Behavior& a, const Behavior& b)
{
    return a.save() == b.save();
}

LocationId LoadContext::location(const nlohmann::json& j) const
{
    if (j.is_number_unsigned() || j.is_number_integer())
    {
        return LocationId{j.get<std::uint64_t>()};
    }
    if (resolve_location)
    {
        return resolve_location(j);
    }
    throw Error(Errc::UnknownLocation, "cannot resolve location reference " + j.dump());
}

AgentId LoadContext::agent(const nlohmann::json& j) const
{
    if (j.is_number_unsigned() || j.is_number_integer())
    {
        return AgentId{j.get<std::uint64_t>()};
    }
    if (resolve_agent)
    {
        return resolve_agent(j);
    }
    throw Error(Errc::UnknownAgent, "cannot resolve agent reference " + j.dump());
}

std::unique_ptr<Behavior> LoadContext::behavior(const nlohmann::json& j) const
{
    if (codec == nullptr)
    {
        throw Error(Errc::Serialization, "no behavior codec available");
    }
    return codec->load(j, *this);
}

void BehaviorCodec::add(std::string kind, Loader loader)
{
    loaders_[std::move(kind)] = std::move(loader);
}

bool BehaviorCodec::knows(std::string_view kind) const
{
    return loaders_.find(kind) != loaders_.end();
}

std::vector<std::string> BehaviorCodec::kinds() const
{
    std::vector<std::string> out;
    for (const auto& [k, _] : loaders_)
        out.push_back(k);
    return out;
}

BehaviorPtr BehaviorCodec::load(const nlohmann::json& j, const LoadContext& ctx) const
{
    if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    {
        throw Error(Errc::Serialization, "behavior must be an object with a string \"kind\"");
    }
    const auto kind = j.at("kind").get<std::string>();
    auto it = loaders_.find(kind);
    if (it == loaders_.end())
    {
        throw Error(Errc::UnknownBehaviorKind, kind);
    }
    LoadContext nested = ctx;
    nested.codec = this;
    BehaviorPtr b;
    try
    {
        b = it->second(j, nested);
    }
    catch (const nlohmann::json::exception& e)
    {
        throw Error(Errc::Serialization, kind + ": " + e.what());
    }
    b->done_ = j.value("done", false);
    return b;
}

} // namespace magent
