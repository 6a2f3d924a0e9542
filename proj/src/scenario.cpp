#include "bgpte/scenario.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "bgpte/error.hpp"
#include "bgpte/policy.hpp"

namespace bgpte {

namespace {

struct Token {
    std::string_view text;
    std::size_t column;  // 1-based
};

struct Line {
    std::size_t number;
    std::vector<Token> tokens;
};

std::vector<Line> tokenize(std::string_view text) {
    std::vector<Line> lines;
    std::size_t number = 0;
    while (!text.empty()) {
        auto nl = text.find('\n');
        std::string_view raw = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++number;
        if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);

        Line line{number, {}};
        std::size_t i = 0;
        while (i < raw.size()) {
            while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t' || raw[i] == '\r')) ++i;
            std::size_t start = i;
            while (i < raw.size() && raw[i] != ' ' && raw[i] != '\t' && raw[i] != '\r') ++i;
            if (i > start) line.tokens.push_back({raw.substr(start, i - start), start + 1});
        }
        if (!line.tokens.empty()) lines.push_back(std::move(line));
    }
    return lines;
}

class Parser {
public:
    Scenario run(std::string_view text) {
        auto lines = tokenize(text);
        for (const auto& line : lines) {
            if (line.tokens[0].text == "as") parse_as(line);
        }
        for (const auto& line : lines) {
            const auto kw = line.tokens[0].text;
            if (kw == "as") continue;
            if (kw == "link") parse_link(line);
            else if (kw == "originate") parse_originate(line);
            else if (kw == "policy") parse_policy(line);
            else if (kw == "localpref") parse_localpref(line);
            else if (kw == "announce" || kw == "withhold") parse_advertisement(line);
            else if (kw == "objective") parse_objective(line);
            else fail(line, 0, "unknown record '" + std::string(kw) + "'");
        }

        auto report = validate_topology(s_.topology);
        for (const auto& f : report.findings) {
            if (f.severity == Severity::Error) throw ConfigError(f.message);
        }
        validate_te_config(s_.topology, s_.te_config);
        return std::move(s_);
    }

private:
    [[noreturn]] static void fail(const Line& line, std::size_t token, const std::string& what) {
        std::size_t col = token < line.tokens.size() ? line.tokens[token].column
                                                     : (line.tokens.back().column + line.tokens.back().text.size());
        throw ParseError(line.number, col, what);
    }

    static void arity(const Line& line, std::size_t min, std::size_t max) {
        if (line.tokens.size() < min) fail(line, line.tokens.size(), "missing field");
        if (line.tokens.size() > max) fail(line, max, "unexpected field");
    }

    static Asn asn_token(const Line& line, std::size_t i) {
        auto a = parse_asn(line.tokens[i].text);
        if (!a) fail(line, i, "invalid ASN '" + std::string(line.tokens[i].text) + "'");
        return *a;
    }

    Asn declared(const Line& line, std::size_t i) const {
        Asn a = asn_token(line, i);
        if (!s_.topology.has_as(a)) fail(line, i, "unknown AS " + to_string(a));
        return a;
    }

    static Prefix prefix_token(const Line& line, std::size_t i) {
        auto p = Prefix::parse(line.tokens[i].text);
        if (!p) fail(line, i, "invalid prefix '" + std::string(line.tokens[i].text) + "'");
        return *p;
    }

    static Community community_token(const Line& line, std::size_t i) {
        try {
            return parse_community(line.tokens[i].text);
        } catch (const ConfigError& e) {
            fail(line, i, e.what());
        }
    }

    static long integer_token(const Line& line, std::size_t i, long lo, long hi) {
        auto t = line.tokens[i].text;
        long v = 0;
        auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc{} || ptr != t.data() + t.size() || v < lo || v > hi) {
            fail(line, i, "expected integer in " + std::to_string(lo) + ".." + std::to_string(hi));
        }
        return v;
    }

    PeerSelector selector_token(const Line& line, std::size_t i) const {
        auto t = line.tokens[i].text;
        if (t == "all") return AllUpstreams{};
        if (t.starts_with("region:")) {
            if (t.size() == 7) fail(line, i, "empty region tag");
            return RegionTag{std::string(t.substr(7))};
        }
        return declared(line, i);
    }

    void parse_as(const Line& line) {
        arity(line, 3, 3);
        Asn a = asn_token(line, 1);
        AsRole role{};
        if (line.tokens[2].text == "stub") role = AsRole::Stub;
        else if (line.tokens[2].text == "transit") role = AsRole::Transit;
        else fail(line, 2, "expected stub|transit");
        if (!s_.topology.ases.emplace(a, role).second) fail(line, 1, "duplicate AS " + to_string(a));
    }

    void parse_link(const Line& line) {
        arity(line, 5, 6);
        InterdomainLink l;
        l.id = std::string(line.tokens[1].text);
        if (l.id == kLocalLink) fail(line, 1, "link id 'local' is reserved");
        if (s_.topology.find_link(l.id)) fail(line, 1, "duplicate link id " + l.id);
        l.endpoint_a = declared(line, 2);
        l.endpoint_b = declared(line, 3);
        if (l.endpoint_a == l.endpoint_b) fail(line, 3, "link endpoints must differ");
        if (line.tokens[4].text == "c2p") l.kind = LinkKind::CustomerToProvider;
        else if (line.tokens[4].text == "p2p") l.kind = LinkKind::PeerToPeer;
        else fail(line, 4, "expected c2p|p2p");
        if (line.tokens.size() == 6) {
            if (line.tokens[5].text != "down") fail(line, 5, "expected 'down'");
            l.up = false;
        }
        s_.topology.links.push_back(std::move(l));
    }

    void parse_originate(const Line& line) {
        arity(line, 3, 3);
        Asn a = declared(line, 1);
        Prefix p = prefix_token(line, 2);
        if (auto other = s_.topology.originator_of(p); other && *other != a) {
            fail(line, 2, "prefix " + p.str() + " already originated by AS " + to_string(*other));
        }
        s_.topology.originations[a].insert(p);
    }

    void parse_policy(const Line& line) {
        arity(line, 3, 6);
        Asn owner = declared(line, 1);
        if (s_.topology.ases.at(owner) != AsRole::Transit) fail(line, 1, "catalog on non-transit AS " + to_string(owner));
        auto& cat = s_.topology.catalogs[owner];
        cat.owner = owner;
        const auto kind = line.tokens[2].text;

        auto fresh = [&](const Community& c) {
            if (cat.defines(c)) fail(line, 3, "community " + to_string(c) + " already mapped at AS " + to_string(owner));
        };
        if (kind == "lp") {
            arity(line, 5, 5);
            Community c = community_token(line, 3);
            fresh(c);
            cat.lp_rules.emplace(c, static_cast<int>(integer_token(line, 4, 0, 0x7fffffff)));
        } else if (kind == "prepend") {
            arity(line, 6, 6);
            Community c = community_token(line, 3);
            fresh(c);
            cat.prepend_rules.emplace(
                c, PrependRule{selector_token(line, 4), static_cast<int>(integer_token(line, 5, 1, kMaxPrependCount))});
        } else if (kind == "suppress") {
            arity(line, 5, 5);
            Community c = community_token(line, 3);
            fresh(c);
            cat.suppress_rules.emplace(c, selector_token(line, 4));
        } else if (kind == "region") {
            arity(line, 5, 5);
            cat.region_of[declared(line, 3)] = std::string(line.tokens[4].text);
        } else if (kind == "drops-community-updates") {
            arity(line, 3, 3);
            cat.drops_community_updates = true;
        } else {
            fail(line, 2, "expected lp|prepend|suppress|region|drops-community-updates");
        }
    }

    void parse_localpref(const Line& line) {
        arity(line, 4, 4);
        Asn a = declared(line, 1);
        Asn n = declared(line, 2);
        s_.topology.lp_overrides[a][n] = static_cast<int>(integer_token(line, 3, 0, 0x7fffffff));
    }

    void parse_advertisement(const Line& line) {
        const bool withhold = line.tokens[0].text == "withhold";
        if (withhold) arity(line, 3, 3);
        else arity(line, 3, 3 + kMaxCommunitiesPerRoute + 1);

        AdvertisementKey key{prefix_token(line, 1), std::string(line.tokens[2].text)};
        if (!s_.topology.find_link(key.link)) fail(line, 2, "unknown link " + key.link);
        AdvertisementAttrs attrs;
        attrs.announced = !withhold;
        for (std::size_t i = 3; i < line.tokens.size(); ++i) {
            auto t = line.tokens[i].text;
            if (t.starts_with("med=")) {
                if (attrs.med) fail(line, i, "duplicate med");
                Line sub{line.number, {{t.substr(4), line.tokens[i].column + 4}}};
                attrs.med = static_cast<std::uint32_t>(integer_token(sub, 0, 0, 0xffffffffL));
            } else {
                attrs.communities.insert(community_token(line, i));
            }
        }
        if (!s_.te_config.entries.emplace(key, std::move(attrs)).second) {
            fail(line, 1, "duplicate advertisement record for " + key.prefix.str() + " on " + key.link);
        }
    }

    void parse_objective(const Line& line) {
        if (line.tokens.size() != 5 && line.tokens.size() != 7) fail(line, std::min<std::size_t>(line.tokens.size(), 5), "expected objective <dest> <src|*> <prefix> <link> [from <src-prefix>]");
        Objective o;
        o.flow.dst_asn = declared(line, 1);
        if (line.tokens[2].text != "*") o.flow.src_asn = declared(line, 2);
        o.flow.dst_prefix = prefix_token(line, 3);
        o.required_link = std::string(line.tokens[4].text);
        if (!s_.topology.find_link(o.required_link)) fail(line, 4, "unknown link " + o.required_link);
        if (line.tokens.size() == 7) {
            if (line.tokens[5].text != "from") fail(line, 5, "expected 'from'");
            o.flow.src_prefix = prefix_token(line, 6);
        }
        s_.objectives.push_back(std::move(o));
    }

    Scenario s_;
};

}  // namespace

Scenario parse_scenario(std::string_view text) { return Parser{}.run(text); }

Topology parse_topology(std::string_view text) { return parse_scenario(text).topology; }

std::string serialize_scenario(const Scenario& s) {
    std::ostringstream out;
    out << serialize_topology(s.topology);
    for (const auto& [key, attrs] : s.te_config.entries) {
        if (!attrs.announced) {
            out << "withhold " << key.prefix.str() << ' ' << key.link << '\n';
            continue;
        }
        out << "announce " << key.prefix.str() << ' ' << key.link;
        if (attrs.med) out << " med=" << *attrs.med;
        for (const auto& c : attrs.communities) out << ' ' << to_string(c);
        out << '\n';
    }
    for (const auto& o : s.objectives) {
        out << "objective " << o.flow.dst_asn.value << ' ' << (o.flow.src_asn ? to_string(*o.flow.src_asn) : "*") << ' '
            << o.flow.dst_prefix.str() << ' ' << o.required_link;
        if (o.flow.src_prefix) out << " from " << o.flow.src_prefix->str();
        out << '\n';
    }
    return out.str();
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read scenario file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

}  // namespace bgpte
