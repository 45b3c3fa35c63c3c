#include "polybohr/inequalities.hpp"

#include <nlohmann/json.hpp>

namespace polybohr {

void to_json(nlohmann::json& j, const CheckReport& r)
{
    j = nlohmann::json{{"lhs", r.lhs}, {"rhs", r.rhs}, {"holds", r.holds}, {"slack", r.slack}};
    for (const auto& [k, v] : r.extras) j[k] = v;
}

} // namespace polybohr
