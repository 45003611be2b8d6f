// Loading unit attribute tables and adjacency lists, dual-graph construction,
// and the shared-perimeter edge-pruning rule.
#pragma once

#include <string>
#include <vector>

#include "twodist/dual_graph.hpp"

namespace twodist {

// units.csv: unit_id,population,area_km2,perimeter_km,bbox_minx,bbox_miny,
//            bbox_maxx,bbox_maxy[,<contest>_dem,<contest>_rep[,<contest>_ind]...]
std::vector<UnitRecord> load_units(const std::string& path);

// GeoJSON convenience alias: reads the same attributes from each feature's
// "properties"; geometry is ignored.
std::vector<UnitRecord> load_units_geojson(const std::string& path);

// adjacency.csv: unit_a,unit_b,shared_perimeter_km
std::vector<AdjacencyRecord> load_adjacency(const std::string& path);

// Builds the dual graph. Succeeds on disconnected input but flags
// connected=false; downstream operations require a connected graph.
DualGraph build_graph(std::vector<UnitRecord> units,
                      const std::vector<AdjacencyRecord>& adjacency);

// Removes every edge whose shared border is shorter than min_length_km AND
// below min_fraction of BOTH endpoint perimeters. Throws PruneError if the
// removal would disconnect the graph.
DualGraph prune_short_borders(const DualGraph& g, double min_length_km, double min_fraction);

// Contest ids present in the units' vote tables, sorted.
std::vector<std::string> contest_ids(const std::vector<UnitRecord>& units);

}  // namespace twodist
