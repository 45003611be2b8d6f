#include "twodist/plan.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "twodist/errors.hpp"

namespace twodist {

bool is_valid_plan(const DualGraph& g, const Plan& p) {
    if (p.n != g.n() || p.n < 2) return false;
    if (!p.district0.test(0)) return false;
    NodeSet d1 = p.district1();
    if (p.district0.empty() || d1.empty()) return false;
    return is_connected_within(g.adj, p.district0) && is_connected_within(g.adj, d1);
}

std::string plan_to_hex(const Plan& p) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    bool started = false;
    for (int wi = 3; wi >= 0; --wi) {
        for (int nib = 15; nib >= 0; --nib) {
            unsigned d = (p.district0.w[wi] >> (nib * 4)) & 0xF;
            if (!started) {
                if (d == 0) continue;
                started = true;
            }
            out.push_back(digits[d]);
        }
    }
    return started ? out : "0";
}

Plan plan_from_hex(const std::string& hex, int n) {
    if (hex.empty()) throw ParseError("pbm1: empty plan line");
    NodeSet s;
    int bit = 0;
    for (std::size_t i = hex.size(); i-- > 0;) {
        char c = hex[i];
        unsigned d;
        if (c >= '0' && c <= '9') d = c - '0';
        else if (c >= 'a' && c <= 'f') d = 10 + (c - 'a');
        else if (c >= 'A' && c <= 'F') d = 10 + (c - 'A');
        else throw ParseError(std::string("pbm1: bad hex character '") + c + "'");
        if (d && bit >= kMaxNodes) throw ParseError("pbm1: bitmask wider than supported");
        for (int k = 0; k < 4; ++k)
            if ((d >> k) & 1) {
                if (bit + k >= n) throw ParseError("pbm1: bit beyond n in plan line");
                s.set(bit + k);
            }
        bit += 4;
    }
    if (!s.test(0)) throw DataError("pbm1: plan not canonical (unit 0 not in district 0)");
    if (s == NodeSet::full(n)) throw DataError("pbm1: district 1 is empty");
    Plan p;
    p.n = n;
    p.district0 = s;
    return p;
}

PlanFileWriter::PlanFileWriter(std::ostream& out, int n, const std::string& graph_id)
    : out_(out), n_(n) {
    out_ << "#pbm1 n=" << n << " graph=" << graph_id << "\n";
}

void PlanFileWriter::write(const Plan& p) {
    out_ << plan_to_hex(p) << "\n";
    ++count_;
}

PlanFile read_plan_file(const std::string& path, int expected_n) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open plan file: " + path);
    std::string header;
    if (!std::getline(in, header)) throw DataError(path + ": empty plan file");

    PlanFile f;
    std::istringstream hs(header);
    std::string tag, nfield, gfield;
    hs >> tag >> nfield;
    std::getline(hs, gfield);
    if (tag != "#pbm1" || nfield.rfind("n=", 0) != 0)
        throw ParseError(path + ": missing '#pbm1 n=<n> graph=<id>' header");
    f.n = std::stoi(nfield.substr(2));
    auto gpos = gfield.find("graph=");
    if (gpos != std::string::npos) f.graph_id = gfield.substr(gpos + 6);
    if (f.n < 2 || f.n > kMaxNodes)
        throw DataError(path + ": unsupported n=" + std::to_string(f.n));
    if (expected_n >= 0 && f.n != expected_n)
        throw DataError(path + ": plan file n=" + std::to_string(f.n) +
                        " does not match graph n=" + std::to_string(expected_n));

    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        try {
            f.plans.push_back(plan_from_hex(line, f.n));
        } catch (const Error& e) {
            throw ParseError(path + " line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return f;
}

void write_plan_file(const std::string& path, const std::vector<Plan>& plans, int n,
                     const std::string& graph_id) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write plan file: " + path);
    PlanFileWriter w(out, n, graph_id);
    for (const auto& p : plans) w.write(p);
}

}  // namespace twodist
