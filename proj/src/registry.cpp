#include "magent/registry.hpp"

#include "magent/behaviors/basic.hpp"
#include "magent/behaviors/composite.hpp"
#include "magent/itinerary/itinerary.hpp"

namespace magent {

std::shared_ptr<Registry> make_default_registry()
{
    auto reg = std::make_shared<Registry>();
    register_basic_behaviors(reg->behaviors);
    register_composite_behaviors(reg->behaviors);
    register_itinerary_behaviors(reg->behaviors);
    register_basic_actions(reg->actions);
    register_itinerary_actions(reg->actions);
    register_role_actions(reg->actions, reg->roles);
    return reg;
}

} // namespace magent
