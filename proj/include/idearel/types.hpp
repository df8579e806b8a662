#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace idearel {

// Column index of an idea (topic or keyword) in an idea inventory.
enum class IdeaId : std::uint32_t {};

constexpr std::size_t to_index(IdeaId id) noexcept { return static_cast<std::size_t>(id); }
constexpr IdeaId idea_at(std::size_t index) noexcept { return static_cast<IdeaId>(index); }

// Sign pattern of (PMI, prevalence correlation).
enum class RelationType : std::uint8_t {
    friendship,    // (+, +)
    tryst,         // (+, -)
    arms_race,     // (-, +)
    head_to_head,  // (-, -)
    degenerate,
};

inline constexpr RelationType kRelationTypes[] = {RelationType::friendship, RelationType::tryst,
                                                  RelationType::arms_race, RelationType::head_to_head};

std::string_view to_string(RelationType type) noexcept;
std::optional<RelationType> parse_relation_type(std::string_view name) noexcept;

}  // namespace idearel
