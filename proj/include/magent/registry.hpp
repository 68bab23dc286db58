#pragma once

#include "magent/behaviors/role_factory.hpp"
#include "magent/core/action.hpp"
#include "magent/core/behavior.hpp"

#include <memory>

namespace magent {

/// Everything a platform needs to run and revive behaviors: actions, behavior loaders
/// and roles. Lives behind a shared_ptr so registered closures may refer back to it.
struct Registry
{
    ActionRegistry actions;
    BehaviorCodec behaviors;
    RoleRegistry roles;

    Registry() = default;
    Registry(const Registry&) = delete;
    Registry& operator=(const Registry&) = delete;
};

/// Registry with every built-in behavior kind and action installed.
std::shared_ptr<Registry> make_default_registry();

} // namespace magent
