// A plan is a bipartition of the dual graph into two contiguous districts,
// held in canonical orientation: unit 0 always belongs to district 0.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "twodist/dual_graph.hpp"
#include "twodist/nodeset.hpp"

namespace twodist {

struct Plan {
    NodeSet district0;  // canonical: contains unit 0
    int n = 0;

    NodeSet district1() const { return NodeSet::full(n) - district0; }

    // Accepts either side of the split and canonicalizes.
    static Plan from_side(const NodeSet& side, int n) {
        Plan p;
        p.n = n;
        p.district0 = side.test(0) ? side : NodeSet::full(n) - side;
        return p;
    }

    bool operator==(const Plan& o) const { return n == o.n && district0 == o.district0; }
};

struct PlanHash {
    std::size_t operator()(const Plan& p) const { return p.district0.hash() ^ p.n; }
};

// Both districts nonempty and contiguous (independent BFS per side).
bool is_valid_plan(const DualGraph& g, const Plan& p);

// --- .pbm1 plan-list format ---------------------------------------------
// Header line:  #pbm1 n=<n> graph=<id>
// Body: one plan per line, the district-0 unit indices as a lowercase hex
// bitmask (bit i set <=> unit i in district 0), no leading zeros.

std::string plan_to_hex(const Plan& p);
Plan plan_from_hex(const std::string& hex, int n);

class PlanFileWriter {
public:
    PlanFileWriter(std::ostream& out, int n, const std::string& graph_id);
    void write(const Plan& p);
    std::uint64_t written() const { return count_; }

private:
    std::ostream& out_;
    int n_;
    std::uint64_t count_ = 0;
};

struct PlanFile {
    int n = 0;
    std::string graph_id;
    std::vector<Plan> plans;
};

// Reads a .pbm1 file; if expected_n >= 0 it must match the header.
PlanFile read_plan_file(const std::string& path, int expected_n = -1);

void write_plan_file(const std::string& path, const std::vector<Plan>& plans, int n,
                     const std::string& graph_id);

}  // namespace twodist
