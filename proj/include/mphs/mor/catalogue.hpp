#pragma once

#include <string>
#include <vector>

#include <mphs/errors.hpp>

namespace mphs::mor {

class NoFeasibleModel : public Error {
public:
  explicit NoFeasibleModel(const std::string& detail) : Error("NoFeasibleModel", detail) {}
};

// One model of a fidelity hierarchy: lower tiers are cheaper surrogates,
// higher tiers more faithful. Accuracy is an error estimate (smaller is
// better), runtime an estimated cost in seconds.
struct CatalogueEntry {
  std::string id;
  int tier = 0;
  double accuracy = 0.0;
  double runtime = 0.0;
  std::string provenance;
};

struct ModelCatalogue {
  std::vector<CatalogueEntry> entries;
};

// Cheapest entry (lowest tier) whose accuracy estimate meets accuracy_budget
// and whose runtime estimate meets runtime_budget; ties broken by lower
// runtime, then lexicographically smaller id. Throws InvalidArgument on an
// empty catalogue or duplicate ids, NoFeasibleModel when nothing qualifies.
std::string catalogue_select(const ModelCatalogue& cat, double accuracy_budget,
                             double runtime_budget);

}  // namespace mphs::mor
