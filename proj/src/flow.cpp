#include "bgpte/flow.hpp"

#include <sstream>

#include "bgpte/error.hpp"

namespace bgpte {

FlowClass classify(const Flow& f) {
    if (f.src_prefix) return FlowClass::SourcePrefixBased;
    if (f.src_asn) return FlowClass::SourceAsnBased;
    return FlowClass::DestinationPrefixBased;
}

std::string_view to_string(FlowClass c) {
    switch (c) {
        case FlowClass::DestinationPrefixBased: return "destination-prefix-based";
        case FlowClass::SourceAsnBased: return "source-asn-based";
        case FlowClass::SourcePrefixBased: return "source-prefix-based";
    }
    return "?";
}

std::string to_string(const Flow& f) {
    return "{" + (f.src_prefix ? f.src_prefix->str() : std::string("*")) + "," +
           (f.src_asn ? to_string(*f.src_asn) : std::string("*")) + "," + f.dst_prefix.str() + "," +
           to_string(f.dst_asn) + "}";
}

std::optional<std::vector<std::string>> resolve_forwarding(const ConvergedState& s, const Topology& t, Asn src,
                                                           const Prefix& dst_prefix) {
    if (!t.has_as(src)) throw ConfigError("unknown AS " + to_string(src));
    if (!t.covering_originator(dst_prefix)) throw ConfigError("no AS originates " + dst_prefix.str());

    std::vector<std::string> hops;
    std::set<std::string> seen;
    Asn cur = src;
    while (true) {
        auto r = best_route(s, cur, dst_prefix);
        if (!r) return std::nullopt;
        if (r->is_local()) return hops;
        const auto* link = t.find_link(r->learned_on);
        // A repeated link means mixed-length entries disagree hop by hop: treat as a black hole.
        if (!link || !seen.insert(link->id).second) return std::nullopt;
        hops.push_back(link->id);
        cur = link->other(cur);
    }
}

IngressMap ingress_map(const ConvergedState& s, const Topology& t, Asn dest, const std::set<Prefix>& extra_prefixes) {
    auto it = t.originations.find(dest);
    if (it == t.originations.end() || it->second.empty()) {
        throw ConfigError("AS " + to_string(dest) + " originates no prefix");
    }
    std::set<Prefix> prefixes = it->second;
    prefixes.insert(extra_prefixes.begin(), extra_prefixes.end());

    IngressMap m{dest, {}};
    for (const auto& [src, _] : t.ases) {
        if (src == dest) continue;
        for (const auto& p : prefixes) {
            auto hops = resolve_forwarding(s, t, src, p);
            std::optional<std::string> link;
            if (hops && !hops->empty()) link = hops->back();
            m.entries.emplace(IngressKey{src, p}, std::move(link));
        }
    }
    return m;
}

std::vector<IngressMove> diff_entries(const IngressEntries& base, const IngressEntries& next) {
    if (base.size() != next.size()) throw Error("ingress maps cover different (source, prefix) keys");
    std::vector<IngressMove> out;
    auto it = next.begin();
    for (const auto& [key, link] : base) {
        if (it->first != key) throw Error("ingress maps cover different (source, prefix) keys");
        if (it->second != link) out.push_back({key.src, key.dst_prefix, link, it->second});
        ++it;
    }
    return out;
}

std::vector<IngressMove> diff_ingress(const IngressMap& base, const IngressMap& next) {
    if (base.dest != next.dest) throw Error("ingress maps are for different destinations");
    return diff_entries(base.entries, next.entries);
}

std::string render_link(const std::optional<std::string>& link) { return link ? *link : "unreachable"; }

std::string ingress_csv(const IngressEntries& entries) {
    std::ostringstream out;
    out << "src_asn,dst_prefix,link\n";
    for (const auto& [key, link] : entries) {
        out << key.src.value << ',' << key.dst_prefix.str() << ',' << render_link(link) << '\n';
    }
    return out.str();
}

IngressEntries parse_ingress_csv(std::string_view text) {
    IngressEntries out;
    std::size_t line_no = 0;
    while (!text.empty()) {
        auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || (line_no == 1 && line == "src_asn,dst_prefix,link")) continue;

        auto c1 = line.find(',');
        auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
        if (c2 == std::string_view::npos) throw ParseError(line_no, 1, "expected src_asn,dst_prefix,link");
        auto src = parse_asn(line.substr(0, c1));
        if (!src) throw ParseError(line_no, 1, "bad ASN");
        auto prefix = Prefix::parse(line.substr(c1 + 1, c2 - c1 - 1));
        if (!prefix) throw ParseError(line_no, c1 + 2, "bad prefix");
        std::string link(line.substr(c2 + 1));
        if (link.empty()) throw ParseError(line_no, c2 + 2, "missing link");
        std::optional<std::string> value;
        if (link != "unreachable") value = link;
        if (!out.emplace(IngressKey{*src, *prefix}, std::move(value)).second) {
            throw ParseError(line_no, 1, "duplicate key");
        }
    }
    return out;
}

}  // namespace bgpte
