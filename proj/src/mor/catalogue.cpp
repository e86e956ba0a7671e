#include <mphs/mor/catalogue.hpp>

#include <set>
#include <tuple>

namespace mphs::mor {

std::string catalogue_select(const ModelCatalogue& cat, double accuracy_budget,
                             double runtime_budget) {
  if (cat.entries.empty()) throw InvalidArgument("catalogue is empty");

  std::set<std::string> ids;
  for (const auto& entry : cat.entries) {
    if (entry.id.empty()) throw InvalidArgument("catalogue entry has an empty id");
    if (!ids.insert(entry.id).second)
      throw InvalidArgument("duplicate catalogue id: " + entry.id);
  }

  const CatalogueEntry* best = nullptr;
  for (const auto& entry : cat.entries) {
    if (entry.accuracy > accuracy_budget || entry.runtime > runtime_budget) continue;
    if (best == nullptr || std::tie(entry.tier, entry.runtime, entry.id) <
                               std::tie(best->tier, best->runtime, best->id))
      best = &entry;
  }
  if (best == nullptr)
    throw NoFeasibleModel("no catalogue entry meets accuracy " +
                          std::to_string(accuracy_budget) + " within runtime " +
                          std::to_string(runtime_budget));
  return best->id;
}

}  // namespace mphs::mor
