#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace bgpte {

/// Autonomous system number. Zero is reserved and never a valid ASN.
struct Asn {
    std::uint32_t value = 0;

    constexpr Asn() = default;
    constexpr explicit Asn(std::uint32_t v) : value(v) {}

    constexpr auto operator<=>(const Asn&) const = default;
};

std::string to_string(Asn a);
/// Parses a decimal ASN in 1..=4294967295.
std::optional<Asn> parse_asn(std::string_view text);

/// IPv4 prefix with host bits cleared.
class Prefix {
public:
    constexpr Prefix() = default;

    /// Throws ConfigError when `length` > 32 or host bits are set.
    static Prefix make(std::uint32_t base, int length);
    /// "a.b.c.d/len"; nullopt on any syntax or host-bit violation.
    static std::optional<Prefix> parse(std::string_view text);

    std::uint32_t base() const noexcept { return base_; }
    int length() const noexcept { return length_; }
    std::uint32_t mask() const noexcept { return mask_for(length_); }

    /// Non-strict containment: true when `other` lies inside (or equals) this prefix.
    bool contains(const Prefix& other) const noexcept {
        return other.length_ >= length_ && (other.base_ & mask()) == base_;
    }
    bool strictly_contains(const Prefix& other) const noexcept {
        return other.length_ > length_ && contains(other);
    }

    /// The two halves one bit longer; requires length() < 32.
    Prefix lower_half() const;
    Prefix upper_half() const;

    std::string str() const;

    auto operator<=>(const Prefix&) const = default;

    static constexpr std::uint32_t mask_for(int length) noexcept {
        return length == 0 ? 0u : ~std::uint32_t{0} << (32 - length);
    }

private:
    constexpr Prefix(std::uint32_t base, std::uint8_t length) : base_(base), length_(length) {}

    std::uint32_t base_ = 0;
    std::uint8_t length_ = 0;
};

/// Classic 4-byte community value, rendered "high:low".
struct Community {
    std::uint16_t high = 0;
    std::uint16_t low = 0;

    static constexpr std::size_t encoded_size = 4;

    auto operator<=>(const Community&) const = default;
};

std::string to_string(const Community& c);

/// What the neighbor on a link is to the local AS.
enum class Role : std::uint8_t { Customer, Peer, Provider };

std::string_view to_string(Role r);

}  // namespace bgpte
