#include "tfpp/percolation.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace tfpp {

void Configuration::trim() {
    int rem = nbits_ & 63;
    if (rem && !words_.empty()) words_.back() &= (uint64_t{1} << rem) - 1;
}

void Configuration::serialize(std::ostream& os) const {
    os << "config " << mask_id_ << " ";
    int64_t nbytes = (nbits_ + 7) / 8;
    static const char* hex = "0123456789abcdef";
    for (int64_t k = 0; k < nbytes; ++k) {
        uint8_t byte = static_cast<uint8_t>(words_[k >> 3] >> ((k & 7) * 8));
        os << hex[byte >> 4] << hex[byte & 15];
    }
    if (nbytes == 0) os << "-"; // empty payload placeholder
    os << "\n";
}

Configuration Configuration::deserialize(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("config deserialize: empty input");
    // Tokens: "config", mask_id words..., hex payload (last token).
    std::vector<std::string> tok;
    std::istringstream ls(line);
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.size() < 3 || tok[0] != "config")
        throw std::runtime_error("config deserialize: bad header");
    Configuration c;
    for (size_t i = 1; i + 1 < tok.size(); ++i) {
        if (i > 1) c.mask_id_ += " ";
        c.mask_id_ += tok[i];
    }
    const std::string& hex = tok.back();
    if (hex == "-") return c;
    if (hex.size() % 2) throw std::runtime_error("config deserialize: odd hex length");
    int64_t nbytes = static_cast<int64_t>(hex.size() / 2);
    c.nbits_ = nbytes * 8; // upper bound; true bit count belongs to the mask
    c.words_.assign((nbytes + 7) / 8, 0);
    auto nibble = [](char ch) -> uint64_t {
        if (ch >= '0' && ch <= '9') return ch - '0';
        if (ch >= 'a' && ch <= 'f') return ch - 'a' + 10;
        throw std::runtime_error("config deserialize: bad hex digit");
    };
    for (int64_t k = 0; k < nbytes; ++k) {
        uint64_t byte = (nibble(hex[2 * k]) << 4) | nibble(hex[2 * k + 1]);
        c.words_[k >> 3] |= byte << ((k & 7) * 8);
    }
    return c;
}

Configuration sample_config(const RegionMask& mask, RngStream& stream) {
    Configuration c(mask);
    for (size_t k = 0; k < c.words().size(); ++k) c.word(k) = stream.next_u64();
    c.trim();
    return c;
}

ConfigEnumerator::ConfigEnumerator(const RegionMask& mask) : mask_(&mask) {
    if (mask.site_count() > 30)
        throw std::invalid_argument("enumerate_configs: mask has " +
                                    std::to_string(mask.site_count()) +
                                    " sites, limit is 30");
    total_ = uint64_t{1} << mask.site_count();
}

bool ConfigEnumerator::next(Configuration& out) {
    if (counter_ >= total_) return false;
    out = Configuration(*mask_);
    if (!out.words().empty()) out.word(0) = counter_;
    ++counter_;
    return true;
}

} // namespace tfpp
