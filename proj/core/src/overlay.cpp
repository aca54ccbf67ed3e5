#include "gdht/overlay.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <stdexcept>

#include "gdht/random.hpp"

namespace gdht {

namespace {

NodeRing make_ring(std::vector<Identifier> ids) {
    if (ids.empty()) throw std::invalid_argument("an overlay needs at least one node");
    return NodeRing(std::move(ids));
}

}  // namespace

Overlay::Overlay(std::vector<Identifier> ids, MetricParams params, Algorithm algorithm, SnapshotOptions options)
    : options_(std::move(options)),
      snapshot_(RoutingSnapshot::build(algorithm, params, make_ring(std::move(ids)), options_)) {
    for (const Identifier& n : snapshot_.ring().nodes()) stores_[n];
    for (const Identifier& n : snapshot_.ring().nodes()) {
        if (options_.fixtures.contains(n)) continue;
        const auto report =
            validate_table(snapshot_.state_of(n), snapshot_.ring(), params, options_.budgets.for_node(n));
        if (!report.ok()) throw std::logic_error("built routing state failed validation");
    }
}

ChurnEvent Overlay::join(const Identifier& id) {
    if ((id.value & ~params().modulus_mask()) != Uint160{}) {
        throw std::invalid_argument("joining id is wider than the identifier space");
    }
    if (ring().contains(id)) throw std::invalid_argument("node " + render_id(id, params()) + " already present");
    std::vector<Identifier> members(ring().nodes().begin(), ring().nodes().end());
    members.push_back(id);
    return settle(ChurnEvent::Kind::Join, id, std::move(members));
}

ChurnEvent Overlay::leave(const Identifier& id) {
    if (!ring().contains(id)) throw std::invalid_argument("node " + render_id(id, params()) + " is not present");
    if (ring().size() == 1) throw std::invalid_argument("cannot remove the last node");
    std::vector<Identifier> members;
    for (const Identifier& n : ring().nodes()) {
        if (n != id) members.push_back(n);
    }
    return settle(ChurnEvent::Kind::Leave, id, std::move(members));
}

ChurnEvent Overlay::settle(ChurnEvent::Kind kind, const Identifier& node, std::vector<Identifier> members) {
    // Fixtures describe the initial membership; from here on every table is built.
    options_.fixtures.clear();
    if (kind == ChurnEvent::Kind::Leave) options_.budgets.per_node.erase(node);
    RoutingSnapshot next = RoutingSnapshot::build(algorithm(), params(), NodeRing(std::move(members)), options_);

    ChurnEvent event{kind, node, 0, {}, {}, 0};
    for (const Identifier& n : next.ring().nodes()) {
        if (!snapshot_.contains(n) || snapshot_.state_of(n) != next.state_of(n)) event.affected_nodes.push_back(n);
    }

    std::map<Identifier, std::map<Identifier, std::string>> stores;
    for (const Identifier& n : next.ring().nodes()) stores[n];
    for (auto& [holder, pairs] : stores_) {
        for (auto& [key, value] : pairs) {
            const Identifier root = root_of_oracle(key, next.ring().nodes(), params());
            if (root != holder) event.moves.push_back({key, holder, root});
            stores[root][key] = std::move(value);
        }
    }
    std::sort(event.moves.begin(), event.moves.end());
    event.keys_moved = event.moves.size();

    stores_ = std::move(stores);
    snapshot_ = std::move(next);
    event.version = ++version_;
    return event;
}

Placement Overlay::put(const Identifier& key, std::string value, std::optional<Identifier> source) {
    if ((key.value & ~params().modulus_mask()) != Uint160{}) {
        throw std::invalid_argument("key hash is wider than the identifier space");
    }
    Placement p{key, root_of_oracle(key, ring().nodes(), params()), std::nullopt};
    if (source) p.route = lookup(snapshot_, *source, key);
    // A key lives at exactly one node; drop any stale copy first.
    for (auto& [holder, pairs] : stores_) pairs.erase(key);
    stores_[p.root][key] = std::move(value);
    return p;
}

GetResult Overlay::get(const Identifier& source, const Identifier& key) const {
    GetResult r{std::nullopt, lookup(snapshot_, source, key)};
    const auto& store = stores_.at(r.trace.root());
    if (const auto it = store.find(key); it != store.end()) r.value = it->second;
    return r;
}

std::vector<PlacementViolation> Overlay::audit_placement() const {
    std::vector<PlacementViolation> out;
    for (const auto& [holder, pairs] : stores_) {
        for (const auto& [key, value] : pairs) {
            const Identifier root = root_of_oracle(key, ring().nodes(), params());
            if (root != holder) out.push_back({key, holder, root});
        }
    }
    return out;
}

std::map<Identifier, ValidationReport> Overlay::validate() const {
    std::map<Identifier, ValidationReport> out;
    for (const Identifier& n : ring().nodes()) {
        auto report = validate_table(snapshot_.state_of(n), ring(), params(), options_.budgets.for_node(n));
        if (!report.ok()) out.emplace(n, std::move(report));
    }
    return out;
}

std::map<Identifier, Identifier> Overlay::placement() const {
    std::map<Identifier, Identifier> out;
    for (const auto& [holder, pairs] : stores_) {
        for (const auto& [key, value] : pairs) out.emplace(key, holder);
    }
    return out;
}

std::size_t Overlay::stored_pairs() const {
    std::size_t n = 0;
    for (const auto& [holder, pairs] : stores_) n += pairs.size();
    return n;
}

const std::map<Identifier, std::string>& Overlay::store_of(const Identifier& node) const {
    return stores_.at(node);
}

void Overlay::misplace(const Identifier& key, const Identifier& holder) {
    if (!ring().contains(holder)) throw std::invalid_argument("holder is not a member");
    for (auto& [h, pairs] : stores_) {
        if (auto it = pairs.find(key); it != pairs.end()) {
            std::string value = std::move(it->second);
            pairs.erase(it);
            stores_[holder][key] = std::move(value);
            return;
        }
    }
    throw std::invalid_argument("key is not stored");
}

// ---------------------------------------------------------------------------
// Churn scripts

std::vector<ChurnCommand> parse_churn_script(std::string_view text, const MetricParams& params) {
    std::vector<ChurnCommand> out;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream fields(raw);
        std::string op;
        if (!(fields >> op)) continue;
        const auto fail = [&](const std::string& why) {
            return ParseError("line " + std::to_string(line_no) + ": " + why, line_no);
        };
        const auto id_field = [&]() {
            std::string token;
            if (!(fields >> token)) throw fail(op + " needs an identifier");
            try {
                return parse_id(token, params);
            } catch (const ParseError& e) {
                throw fail(e.what());
            }
        };
        ChurnCommand cmd{ChurnCommand::Op::Audit, {}, {}, {}, line_no};
        if (op == "JOIN" || op == "LEAVE") {
            cmd.op = op == "JOIN" ? ChurnCommand::Op::Join : ChurnCommand::Op::Leave;
            cmd.node = id_field();
        } else if (op == "PUT") {
            cmd.op = ChurnCommand::Op::Put;
            cmd.key = id_field();
            std::getline(fields >> std::ws, cmd.value);
            while (!cmd.value.empty() && std::isspace(static_cast<unsigned char>(cmd.value.back()))) {
                cmd.value.pop_back();
            }
            if (cmd.value.empty()) throw fail("PUT needs a value");
        } else if (op == "GET") {
            cmd.op = ChurnCommand::Op::Get;
            cmd.node = id_field();
            cmd.key = id_field();
        } else if (op == "AUDIT") {
            cmd.op = ChurnCommand::Op::Audit;
        } else {
            throw fail("unknown command '" + op + "'");
        }
        std::string extra;
        if (cmd.op != ChurnCommand::Op::Put && (fields >> extra)) throw fail("trailing field '" + extra + "'");
        out.push_back(std::move(cmd));
    }
    return out;
}

std::string render_churn_script(const std::vector<ChurnCommand>& commands, const MetricParams& params) {
    std::string out;
    for (const auto& c : commands) {
        switch (c.op) {
        case ChurnCommand::Op::Join: out += "JOIN " + render_id(c.node, params); break;
        case ChurnCommand::Op::Leave: out += "LEAVE " + render_id(c.node, params); break;
        case ChurnCommand::Op::Put: out += "PUT " + render_id(c.key, params) + " " + c.value; break;
        case ChurnCommand::Op::Get:
            out += "GET " + render_id(c.node, params) + " " + render_id(c.key, params);
            break;
        case ChurnCommand::Op::Audit: out += "AUDIT"; break;
        }
        out += '\n';
    }
    return out;
}

std::vector<ChurnCommand> random_churn_script(std::vector<Identifier> initial, std::size_t events,
                                              const MetricParams& params, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::set<Identifier> members(initial.begin(), initial.end());
    std::vector<Identifier> keys;
    std::vector<ChurnCommand> out;
    const auto pick = [&](const std::set<Identifier>& s) {
        auto it = s.begin();
        std::advance(it, static_cast<std::ptrdiff_t>(random_index(rng, s.size())));
        return *it;
    };
    for (std::size_t i = 0; i < events; ++i) {
        ChurnCommand c{ChurnCommand::Op::Audit, {}, {}, {}, i + 1};
        const std::size_t roll = random_index(rng, 100);
        if (roll < 25) {
            Identifier id;
            do {
                id = random_identifier(rng, params);
            } while (members.contains(id));
            members.insert(id);
            c.op = ChurnCommand::Op::Join;
            c.node = id;
        } else if (roll < 45 && members.size() > 1) {
            c.op = ChurnCommand::Op::Leave;
            c.node = pick(members);
            members.erase(c.node);
        } else if (roll < 75) {
            c.op = ChurnCommand::Op::Put;
            // Reuse an earlier key now and then so overwrites get exercised.
            c.key = (!keys.empty() && random_index(rng, 5) == 0) ? keys[random_index(rng, keys.size())]
                                                                 : random_identifier(rng, params);
            keys.push_back(c.key);
            c.value = "v" + std::to_string(i);
        } else if (roll < 95) {
            c.op = ChurnCommand::Op::Get;
            c.node = pick(members);
            c.key = keys.empty() ? random_identifier(rng, params) : keys[random_index(rng, keys.size())];
        }
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace gdht
