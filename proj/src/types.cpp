#include "bgpte/types.hpp"

#include <charconv>

#include "bgpte/error.hpp"

namespace bgpte {

namespace {

template <typename T>
std::optional<T> parse_decimal(std::string_view text) {
    if (text.empty()) return std::nullopt;
    for (char c : text) {
        if (c < '0' || c > '9') return std::nullopt;
    }
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
    return value;
}

}  // namespace

std::string to_string(Asn a) { return std::to_string(a.value); }

std::optional<Asn> parse_asn(std::string_view text) {
    auto v = parse_decimal<std::uint32_t>(text);
    if (!v || *v == 0) return std::nullopt;
    return Asn{*v};
}

Prefix Prefix::make(std::uint32_t base, int length) {
    if (length < 0 || length > 32) throw ConfigError("prefix length out of range: " + std::to_string(length));
    if ((base & ~mask_for(length)) != 0) throw ConfigError("prefix has host bits set below /" + std::to_string(length));
    return Prefix{base, static_cast<std::uint8_t>(length)};
}

std::optional<Prefix> Prefix::parse(std::string_view text) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return std::nullopt;
    auto len = parse_decimal<unsigned>(text.substr(slash + 1));
    if (!len || *len > 32) return std::nullopt;

    std::uint32_t base = 0;
    std::string_view addr = text.substr(0, slash);
    for (int octet = 0; octet < 4; ++octet) {
        auto dot = addr.find('.');
        if ((octet < 3) == (dot == std::string_view::npos)) return std::nullopt;
        auto part = parse_decimal<unsigned>(addr.substr(0, dot));
        if (!part || *part > 255 || addr.substr(0, dot).size() > 3) return std::nullopt;
        base = (base << 8) | *part;
        addr = dot == std::string_view::npos ? std::string_view{} : addr.substr(dot + 1);
    }
    if ((base & ~mask_for(static_cast<int>(*len))) != 0) return std::nullopt;
    return Prefix{base, static_cast<std::uint8_t>(*len)};
}

Prefix Prefix::lower_half() const {
    if (length_ >= 32) throw ConfigError("cannot split a /32");
    return Prefix{base_, static_cast<std::uint8_t>(length_ + 1)};
}

Prefix Prefix::upper_half() const {
    if (length_ >= 32) throw ConfigError("cannot split a /32");
    return Prefix{base_ | (std::uint32_t{1} << (31 - length_)), static_cast<std::uint8_t>(length_ + 1)};
}

std::string Prefix::str() const {
    return std::to_string(base_ >> 24) + "." + std::to_string((base_ >> 16) & 0xff) + "." +
           std::to_string((base_ >> 8) & 0xff) + "." + std::to_string(base_ & 0xff) + "/" + std::to_string(length_);
}

std::string to_string(const Community& c) { return std::to_string(c.high) + ":" + std::to_string(c.low); }

std::string_view to_string(Role r) {
    switch (r) {
        case Role::Customer: return "customer";
        case Role::Peer: return "peer";
        case Role::Provider: return "provider";
    }
    return "?";
}

}  // namespace bgpte
