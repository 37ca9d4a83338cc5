#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tfpp/lattice.hpp"
#include "tfpp/rng.hpp"

namespace tfpp {

// Site colors. Yellow carries passage weight 1, blue weight 0; "open" marks
// uncolored boundary hexagons.
enum class Color : uint8_t { Blue = 0, Yellow = 1, Open = 2 };

// One bit per region site in canonical order: bit 1 = yellow = weight 1.
class Configuration {
public:
    Configuration() = default;
    explicit Configuration(const RegionMask& mask)
        : mask_id_(mask.id()), nbits_(mask.site_count()), words_((nbits_ + 63) / 64, 0) {}

    int64_t bit_count() const { return nbits_; }
    const std::string& mask_id() const { return mask_id_; }

    bool bit(int64_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
    void set(int64_t i, bool v) {
        uint64_t m = uint64_t{1} << (i & 63);
        if (v)
            words_[i >> 6] |= m;
        else
            words_[i >> 6] &= ~m;
    }
    void flip(int64_t i) { words_[i >> 6] ^= uint64_t{1} << (i & 63); }

    void fill_all(bool v) {
        uint64_t w = v ? ~uint64_t{0} : 0;
        for (auto& word : words_) word = w;
        trim();
    }

    const std::vector<uint64_t>& words() const { return words_; }
    uint64_t& word(size_t k) { return words_[k]; }
    void trim(); // clear padding bits above nbits_

    friend bool operator==(const Configuration&, const Configuration&) = default;

    // "config <mask_id> <hex>": bits in canonical site order, little-endian
    // within each byte, two lowercase hex digits per byte.
    void serialize(std::ostream& os) const;
    static Configuration deserialize(std::istream& is);

private:
    std::string mask_id_;
    int64_t nbits_ = 0;
    std::vector<uint64_t> words_;
};

// Fair-coin configuration; pure function of (mask, stream state).
Configuration sample_config(const RegionMask& mask, RngStream& stream);

// All 2^|sites| configurations in canonical binary order (bit i of the
// counter drives site i). Refuses masks with more than 30 sites.
class ConfigEnumerator {
public:
    explicit ConfigEnumerator(const RegionMask& mask);
    bool next(Configuration& out); // false when exhausted
    uint64_t total() const { return total_; }

private:
    const RegionMask* mask_;
    uint64_t counter_ = 0;
    uint64_t total_ = 0;
};

struct BoundaryColoring {
    Color l = Color::Open;
    Color r = Color::Open;
    Color i = Color::Open;
    Color o = Color::Open;
};

// Total color lookup over sites plus classified boundary; throws on sites
// outside both.
class EffectiveColoring {
public:
    EffectiveColoring(const RegionMask& mask, const Configuration& config,
                      BoundaryColoring coloring)
        : mask_(&mask), config_(&config), coloring_(coloring) {}

    Color operator()(SiteCoord s) const {
        switch (mask_->classify(s)) {
            case BoundaryClass::In:
                return config_->bit(mask_->site_index(s)) ? Color::Yellow : Color::Blue;
            case BoundaryClass::Dl: return coloring_.l;
            case BoundaryClass::Dr: return coloring_.r;
            case BoundaryClass::Di: return coloring_.i;
            case BoundaryClass::Do: return coloring_.o;
            default: throw RegionError("color query outside sites and boundary");
        }
    }

private:
    const RegionMask* mask_;
    const Configuration* config_;
    BoundaryColoring coloring_;
};

} // namespace tfpp
