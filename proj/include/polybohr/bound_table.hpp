#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "polybohr/constants.hpp"

namespace polybohr {

enum class BoundKind { mult, pol };

struct BoundKey {
    ScalarField field = ScalarField::complex;
    BoundKind kind = BoundKind::mult;
    int m = 1;
    std::string strategy;

    std::string str() const;
};

struct BoundEntry {
    double log_value = 0.0;
    /// Recursion or argmin k, when the strategy has one.
    std::optional<int> k;
};

/// Persistent cache of bound log-values, stored as a JSON map
/// "field/kind/m/strategy" -> {field, kind, m, strategy, log_value[, k]}.
/// Reads may run concurrently; writes are serialized.
class BoundTable {
public:
    BoundTable() = default;
    BoundTable(const BoundTable&) = delete;
    BoundTable& operator=(const BoundTable&) = delete;

    /// Missing file yields an empty table; malformed content throws RejectedInput.
    void load(const std::filesystem::path& path);
    /// Writes to a sibling temp file, then renames over `path`.
    void save(const std::filesystem::path& path) const;

    std::optional<BoundEntry> find(const BoundKey& key) const;
    void put(const BoundKey& key, const BoundEntry& entry);

    BoundEntry get_or_compute(const BoundKey& key, const std::function<BoundEntry()>& compute);

    std::size_t size() const;
    std::size_t misses() const { return misses_; }

    nlohmann::json to_json() const;
    void from_json(const nlohmann::json& j);

private:
    mutable std::shared_mutex mutex_;
    std::map<std::string, std::pair<BoundKey, BoundEntry>> entries_;
    std::size_t misses_ = 0;
};

} // namespace polybohr
