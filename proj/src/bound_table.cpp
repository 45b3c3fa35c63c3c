#include "polybohr/bound_table.hpp"

#include <fstream>
#include <mutex>

#include <nlohmann/json.hpp>

namespace polybohr {

namespace {

std::string kind_name(BoundKind k) { return k == BoundKind::mult ? "mult" : "pol"; }

BoundKind parse_kind(const std::string& s)
{
    if (s == "mult") return BoundKind::mult;
    if (s == "pol") return BoundKind::pol;
    throw RejectedInput("unknown bound kind '" + s + "'");
}

} // namespace

std::string BoundKey::str() const
{
    return to_string(field) + "/" + kind_name(kind) + "/" + std::to_string(m) + "/" + strategy;
}

void BoundTable::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) return;
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw RejectedInput("bound table " + path.string() + " is not valid JSON: " + e.what());
    }
    from_json(j);
}

void BoundTable::save(const std::filesystem::path& path) const
{
    const std::string text = to_json().dump(1) + "\n";
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write bound table " + tmp.string());
        out << text;
    }
    std::filesystem::rename(tmp, path);
}

std::optional<BoundEntry> BoundTable::find(const BoundKey& key) const
{
    std::shared_lock lock(mutex_);
    auto it = entries_.find(key.str());
    if (it == entries_.end()) return std::nullopt;
    return it->second.second;
}

void BoundTable::put(const BoundKey& key, const BoundEntry& entry)
{
    POLYBOHR_REQUIRE(std::isfinite(entry.log_value), ContractViolation, "cached log_value must be finite");
    std::unique_lock lock(mutex_);
    entries_[key.str()] = {key, entry};
}

BoundEntry BoundTable::get_or_compute(const BoundKey& key, const std::function<BoundEntry()>& compute)
{
    if (auto hit = find(key)) return *hit;
    BoundEntry e = compute();
    {
        std::unique_lock lock(mutex_);
        ++misses_;
    }
    put(key, e);
    return e;
}

std::size_t BoundTable::size() const
{
    std::shared_lock lock(mutex_);
    return entries_.size();
}

nlohmann::json BoundTable::to_json() const
{
    std::shared_lock lock(mutex_);
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [name, rec] : entries_) {
        const auto& [key, entry] = rec;
        nlohmann::json e = {{"field", to_string(key.field)},
                            {"kind", kind_name(key.kind)},
                            {"m", key.m},
                            {"strategy", key.strategy},
                            {"log_value", entry.log_value}};
        if (entry.k) e["k"] = *entry.k;
        j[name] = std::move(e);
    }
    return j;
}

void BoundTable::from_json(const nlohmann::json& j)
{
    POLYBOHR_REQUIRE(j.is_object(), RejectedInput, "bound table must be a JSON object");
    std::map<std::string, std::pair<BoundKey, BoundEntry>> parsed;
    try {
        for (const auto& [name, e] : j.items()) {
            BoundKey key{parse_field(e.at("field").get<std::string>()), parse_kind(e.at("kind").get<std::string>()),
                         e.at("m").get<int>(), e.at("strategy").get<std::string>()};
            BoundEntry entry{e.at("log_value").get<double>(), std::nullopt};
            if (e.contains("k")) entry.k = e.at("k").get<int>();
            POLYBOHR_REQUIRE(key.m >= 1, RejectedInput, "bound table entry with m < 1");
            POLYBOHR_REQUIRE(std::isfinite(entry.log_value), RejectedInput, "bound table entry with non-finite value");
            parsed[key.str()] = {key, entry};
        }
    } catch (const nlohmann::json::exception& ex) {
        throw RejectedInput(std::string("malformed bound table entry: ") + ex.what());
    }
    std::unique_lock lock(mutex_);
    for (auto& [name, rec] : parsed) entries_[name] = std::move(rec);
}

} // namespace polybohr
