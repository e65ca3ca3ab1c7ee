#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace roadcov {

enum class Tier { Macro, Small };
enum class Visibility { Los, Nlos };
enum class Rat { MicroWave, MmWave };

// (tier, visibility, RAT) triple indexing the per-link channel constants.
// Only five combinations are realizable: macros and NLOS small cells are
// micro-wave only, and mm-wave requires a LOS small cell.
struct LinkClass {
    Tier tier = Tier::Macro;
    Visibility visibility = Visibility::Los;
    Rat rat = Rat::MicroWave;

    friend bool operator==(const LinkClass&, const LinkClass&) = default;
};

inline bool link_class_valid(const LinkClass& c) {
    if (c.rat == Rat::MmWave && c.tier == Tier::Macro) return false;
    if (c.rat == Rat::MmWave && c.visibility == Visibility::Nlos) return false;
    return true;
}

// Realizable classes in a fixed order used by PerClass<> maps and reports.
enum class ClassId : std::size_t {
    MacroLos = 0,  // (Macro, LOS, u-wave)
    MacroNlos = 1, // (Macro, NLOS, u-wave)
    SmallLosMu = 2,  // (Small, LOS, u-wave)
    SmallNlos = 3,   // (Small, NLOS, u-wave)
    SmallLosMm = 4,  // (Small, LOS, mm-wave)
};

inline constexpr std::size_t kNumClasses = 5;

inline LinkClass to_link_class(ClassId id) {
    switch (id) {
        case ClassId::MacroLos: return {Tier::Macro, Visibility::Los, Rat::MicroWave};
        case ClassId::MacroNlos: return {Tier::Macro, Visibility::Nlos, Rat::MicroWave};
        case ClassId::SmallLosMu: return {Tier::Small, Visibility::Los, Rat::MicroWave};
        case ClassId::SmallNlos: return {Tier::Small, Visibility::Nlos, Rat::MicroWave};
        case ClassId::SmallLosMm: return {Tier::Small, Visibility::Los, Rat::MmWave};
    }
    throw std::invalid_argument("unknown ClassId");
}

inline ClassId to_class_id(const LinkClass& c) {
    if (!link_class_valid(c)) throw std::invalid_argument("unrepresentable link class");
    if (c.tier == Tier::Macro)
        return c.visibility == Visibility::Los ? ClassId::MacroLos : ClassId::MacroNlos;
    if (c.rat == Rat::MmWave) return ClassId::SmallLosMm;
    return c.visibility == Visibility::Los ? ClassId::SmallLosMu : ClassId::SmallNlos;
}

inline const char* class_name(ClassId id) {
    switch (id) {
        case ClassId::MacroLos: return "macro_los";
        case ClassId::MacroNlos: return "macro_nlos";
        case ClassId::SmallLosMu: return "small_los_mu";
        case ClassId::SmallNlos: return "small_nlos";
        case ClassId::SmallLosMm: return "small_los_mm";
    }
    return "?";
}

// Small fixed map keyed by ClassId.
template <typename T>
struct PerClass {
    std::array<T, kNumClasses> values{};

    T& operator[](ClassId id) { return values[static_cast<std::size_t>(id)]; }
    const T& operator[](ClassId id) const { return values[static_cast<std::size_t>(id)]; }
};

} // namespace roadcov
