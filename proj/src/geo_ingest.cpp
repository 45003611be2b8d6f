#include "twodist/geo_ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

#include "twodist/errors.hpp"

namespace twodist {

namespace {

// Minimal CSV reader: comma-separated, double quotes escape embedded commas
// and doubled quotes; no multi-line fields.
std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(std::move(cur));
    return out;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        return -1;
    }
};

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);
    CsvTable t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() && in.peek() == EOF) break;
        auto fields = split_csv_line(line);
        if (first) {
            t.header = std::move(fields);
            first = false;
        } else {
            t.rows.push_back(std::move(fields));
        }
    }
    if (first) throw DataError("empty file: " + path);
    return t;
}

double parse_real(const std::string& s, const std::string& file, std::size_t row,
                  const std::string& col) {
    double v{};
    const char* b = s.data();
    const char* e = b + s.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc{} || p != e)
        throw ParseError(file + " row " + std::to_string(row) + ": column '" + col +
                         "' is not numeric: '" + s + "'");
    return v;
}

std::int64_t parse_int(const std::string& s, const std::string& file, std::size_t row,
                       const std::string& col) {
    std::int64_t v{};
    const char* b = s.data();
    const char* e = b + s.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc{} || p != e)
        throw ParseError(file + " row " + std::to_string(row) + ": column '" + col +
                         "' is not an integer: '" + s + "'");
    return v;
}

const char* const kRequiredUnitCols[] = {"unit_id",   "population", "area_km2",
                                         "perimeter_km", "bbox_minx",  "bbox_miny",
                                         "bbox_maxx", "bbox_maxy"};

// vote column suffix -> member selector
int vote_suffix(const std::string& name, std::string& contest) {
    auto ends_with = [&](const char* suf) {
        std::size_t l = std::char_traits<char>::length(suf);
        return name.size() > l && name.compare(name.size() - l, l, suf) == 0;
    };
    if (ends_with("_dem")) {
        contest = name.substr(0, name.size() - 4);
        return 0;
    }
    if (ends_with("_rep")) {
        contest = name.substr(0, name.size() - 4);
        return 1;
    }
    if (ends_with("_ind")) {
        contest = name.substr(0, name.size() - 4);
        return 2;
    }
    return -1;
}

void validate_unit(const UnitRecord& u, const std::string& where) {
    if (u.population < 0) throw DataError(where + ": population must be >= 0");
    if (!(u.area_km2 > 0)) throw DataError(where + ": area_km2 must be > 0");
    if (!(u.perimeter_km > 0)) throw DataError(where + ": perimeter_km must be > 0");
    if (!(u.bbox.min_x < u.bbox.max_x) || !(u.bbox.min_y < u.bbox.max_y))
        throw DataError(where + ": bbox must satisfy min_x < max_x and min_y < max_y");
    for (const auto& [contest, v] : u.votes)
        if (v.dem < 0 || v.rep < 0 || v.ind < 0)
            throw DataError(where + ": negative vote count for contest '" + contest + "'");
}

void check_unique_ids(const std::vector<UnitRecord>& units) {
    std::set<std::string> seen;
    for (const auto& u : units)
        if (!seen.insert(u.unit_id).second)
            throw DataError("duplicate unit_id '" + u.unit_id + "'");
}

}  // namespace

std::vector<UnitRecord> load_units(const std::string& path) {
    CsvTable t = read_csv(path);

    for (const char* col : kRequiredUnitCols)
        if (t.column(col) < 0) throw SchemaError(path + ": missing required column '" +
                                                 std::string(col) + "'");

    // classify extra columns as vote columns
    struct VoteCol {
        int idx;
        std::string contest;
        int part;  // 0 dem, 1 rep, 2 ind
    };
    std::vector<VoteCol> vote_cols;
    std::map<std::string, std::set<int>> contest_parts;
    for (std::size_t i = 0; i < t.header.size(); ++i) {
        const std::string& name = t.header[i];
        bool required = std::any_of(std::begin(kRequiredUnitCols), std::end(kRequiredUnitCols),
                                    [&](const char* c) { return name == c; });
        if (required) continue;
        std::string contest;
        int part = vote_suffix(name, contest);
        if (part < 0 || contest.empty())
            throw SchemaError(path + ": unrecognized column '" + name +
                              "' (vote columns must be named <contest>_dem/_rep/_ind)");
        vote_cols.push_back({static_cast<int>(i), contest, part});
        contest_parts[contest].insert(part);
    }
    for (const auto& [contest, parts] : contest_parts)
        if (!parts.count(0) || !parts.count(1))
            throw SchemaError(path + ": contest '" + contest +
                              "' needs both _dem and _rep columns");

    const int c_id = t.column("unit_id"), c_pop = t.column("population"),
              c_area = t.column("area_km2"), c_per = t.column("perimeter_km"),
              c_minx = t.column("bbox_minx"), c_miny = t.column("bbox_miny"),
              c_maxx = t.column("bbox_maxx"), c_maxy = t.column("bbox_maxy");

    std::vector<UnitRecord> units;
    units.reserve(t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        const std::size_t line_no = r + 2;  // 1-based, after header
        if (row.size() != t.header.size())
            throw ParseError(path + " row " + std::to_string(line_no) + ": expected " +
                             std::to_string(t.header.size()) + " fields, got " +
                             std::to_string(row.size()));
        UnitRecord u;
        u.unit_id = row[c_id];
        if (u.unit_id.empty())
            throw DataError(path + " row " + std::to_string(line_no) + ": empty unit_id");
        u.population = parse_int(row[c_pop], path, line_no, "population");
        u.area_km2 = parse_real(row[c_area], path, line_no, "area_km2");
        u.perimeter_km = parse_real(row[c_per], path, line_no, "perimeter_km");
        u.bbox = {parse_real(row[c_minx], path, line_no, "bbox_minx"),
                  parse_real(row[c_miny], path, line_no, "bbox_miny"),
                  parse_real(row[c_maxx], path, line_no, "bbox_maxx"),
                  parse_real(row[c_maxy], path, line_no, "bbox_maxy")};
        for (const auto& vc : vote_cols) {
            std::int64_t v = parse_int(row[vc.idx], path, line_no, t.header[vc.idx]);
            auto& counts = u.votes[vc.contest];
            if (vc.part == 0) counts.dem = v;
            else if (vc.part == 1) counts.rep = v;
            else counts.ind = v;
        }
        validate_unit(u, path + " row " + std::to_string(line_no) + " ('" + u.unit_id + "')");
        units.push_back(std::move(u));
    }
    check_unique_ids(units);
    return units;
}

std::vector<UnitRecord> load_units_geojson(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": invalid JSON: " + e.what());
    }
    if (!doc.contains("features") || !doc["features"].is_array())
        throw SchemaError(path + ": not a GeoJSON FeatureCollection (missing 'features')");

    auto get_real = [&](const nlohmann::json& props, const char* key, std::size_t idx) {
        if (!props.contains(key))
            throw SchemaError(path + ": feature " + std::to_string(idx) +
                              " missing property '" + key + "'");
        const auto& v = props[key];
        if (v.is_number()) return v.get<double>();
        if (v.is_string())
            return parse_real(v.get<std::string>(), path, idx, key);
        throw ParseError(path + ": feature " + std::to_string(idx) + " property '" + key +
                         "' is not numeric");
    };
    auto get_int = [&](const nlohmann::json& props, const char* key, std::size_t idx) {
        if (!props.contains(key))
            throw SchemaError(path + ": feature " + std::to_string(idx) +
                              " missing property '" + key + "'");
        const auto& v = props[key];
        if (v.is_number_integer()) return v.get<std::int64_t>();
        if (v.is_string()) return parse_int(v.get<std::string>(), path, idx, key);
        throw ParseError(path + ": feature " + std::to_string(idx) + " property '" + key +
                         "' is not an integer");
    };

    std::vector<UnitRecord> units;
    std::size_t idx = 0;
    for (const auto& feature : doc["features"]) {
        if (!feature.contains("properties"))
            throw SchemaError(path + ": feature " + std::to_string(idx) + " has no properties");
        const auto& props = feature["properties"];
        UnitRecord u;
        if (!props.contains("unit_id") || !props["unit_id"].is_string())
            throw SchemaError(path + ": feature " + std::to_string(idx) +
                              " missing string property 'unit_id'");
        u.unit_id = props["unit_id"].get<std::string>();
        u.population = get_int(props, "population", idx);
        u.area_km2 = get_real(props, "area_km2", idx);
        u.perimeter_km = get_real(props, "perimeter_km", idx);
        u.bbox = {get_real(props, "bbox_minx", idx), get_real(props, "bbox_miny", idx),
                  get_real(props, "bbox_maxx", idx), get_real(props, "bbox_maxy", idx)};
        for (auto it = props.begin(); it != props.end(); ++it) {
            std::string contest;
            int part = vote_suffix(it.key(), contest);
            if (part < 0) continue;
            std::int64_t v = get_int(props, it.key().c_str(), idx);
            auto& counts = u.votes[contest];
            if (part == 0) counts.dem = v;
            else if (part == 1) counts.rep = v;
            else counts.ind = v;
        }
        validate_unit(u, path + " feature " + std::to_string(idx) + " ('" + u.unit_id + "')");
        units.push_back(std::move(u));
        ++idx;
    }
    check_unique_ids(units);
    return units;
}

std::vector<AdjacencyRecord> load_adjacency(const std::string& path) {
    CsvTable t = read_csv(path);
    for (const char* col : {"unit_a", "unit_b", "shared_perimeter_km"})
        if (t.column(col) < 0)
            throw SchemaError(path + ": missing required column '" + std::string(col) + "'");
    const int c_a = t.column("unit_a"), c_b = t.column("unit_b"),
              c_s = t.column("shared_perimeter_km");

    std::vector<AdjacencyRecord> recs;
    std::set<std::pair<std::string, std::string>> seen;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        const std::size_t line_no = r + 2;
        if (static_cast<int>(row.size()) <= std::max({c_a, c_b, c_s}))
            throw ParseError(path + " row " + std::to_string(line_no) + ": too few fields");
        AdjacencyRecord a;
        a.unit_a = row[c_a];
        a.unit_b = row[c_b];
        a.shared_perimeter_km = parse_real(row[c_s], path, line_no, "shared_perimeter_km");
        if (a.unit_a == a.unit_b)
            throw DataError(path + " row " + std::to_string(line_no) + ": self-adjacency for '" +
                            a.unit_a + "'");
        if (!(a.shared_perimeter_km > 0))
            throw DataError(path + " row " + std::to_string(line_no) +
                            ": shared_perimeter_km must be > 0");
        auto key = std::minmax(a.unit_a, a.unit_b);
        if (!seen.insert(key).second)
            throw DataError(path + " row " + std::to_string(line_no) +
                            ": duplicate adjacency for pair ('" + key.first + "', '" +
                            key.second + "')");
        recs.push_back(std::move(a));
    }
    return recs;
}

DualGraph build_graph(std::vector<UnitRecord> units,
                      const std::vector<AdjacencyRecord>& adjacency) {
    check_unique_ids(units);
    if (static_cast<int>(units.size()) > kMaxNodes)
        throw SizeError("unit count " + std::to_string(units.size()) + " exceeds supported max " +
                        std::to_string(kMaxNodes));

    DualGraph g;
    g.units = std::move(units);

    std::map<std::string, int> index;
    for (int i = 0; i < g.n(); ++i) index[g.units[i].unit_id] = i;

    std::set<std::pair<int, int>> seen;
    for (const auto& rec : adjacency) {
        auto ita = index.find(rec.unit_a);
        auto itb = index.find(rec.unit_b);
        if (ita == index.end())
            throw ReferenceError("adjacency references unknown unit '" + rec.unit_a + "'");
        if (itb == index.end())
            throw ReferenceError("adjacency references unknown unit '" + rec.unit_b + "'");
        int a = ita->second, b = itb->second;
        if (a == b) throw DataError("self-adjacency for unit '" + rec.unit_a + "'");
        if (a > b) std::swap(a, b);
        if (!seen.insert({a, b}).second)
            throw DataError("duplicate adjacency for pair ('" + rec.unit_a + "', '" +
                            rec.unit_b + "')");
        g.edges.push_back({a, b, rec.shared_perimeter_km});
    }
    std::sort(g.edges.begin(), g.edges.end(), [](const GraphEdge& x, const GraphEdge& y) {
        return std::pair(x.a, x.b) < std::pair(y.a, y.b);
    });
    g.geo_edges = g.edges;
    g.rebuild_derived();
    g.id = "n" + std::to_string(g.n()) + "m" + std::to_string(g.m());
    return g;
}

DualGraph prune_short_borders(const DualGraph& g, double min_length_km, double min_fraction) {
    if (!(min_length_km >= 0)) throw ConfigError("prune: min_length_km must be >= 0");
    if (!(min_fraction > 0) || !(min_fraction < 1))
        throw ConfigError("prune: min_fraction must lie in (0,1)");
    if (!g.connected) throw StructureError("prune: input graph must be connected");

    DualGraph out = g;
    out.edges.clear();
    for (const auto& e : g.edges) {
        const double frac_a = e.shared_perimeter_km / g.units[e.a].perimeter_km;
        const double frac_b = e.shared_perimeter_km / g.units[e.b].perimeter_km;
        const bool remove = e.shared_perimeter_km < min_length_km && frac_a < min_fraction &&
                            frac_b < min_fraction;
        if (!remove) out.edges.push_back(e);
    }
    out.rebuild_derived();
    if (!out.connected) {
        auto comps = components_within(out.adj, NodeSet::full(out.n()));
        // everything outside the largest component counts as cut off
        const NodeSet* largest = &comps[0];
        for (const auto& c : comps)
            if (c.count() > largest->count()) largest = &c;
        std::string names;
        (NodeSet::full(out.n()) - *largest).for_each([&](int i) {
            if (!names.empty()) names += ", ";
            names += out.units[i].unit_id;
        });
        throw PruneError("pruning disconnects the graph; cut-off units: " + names);
    }
    out.id = "n" + std::to_string(out.n()) + "m" + std::to_string(out.m());
    return out;
}

std::vector<std::string> contest_ids(const std::vector<UnitRecord>& units) {
    std::set<std::string> ids;
    for (const auto& u : units)
        for (const auto& [contest, v] : u.votes) ids.insert(contest);
    return {ids.begin(), ids.end()};
}

}  // namespace twodist
