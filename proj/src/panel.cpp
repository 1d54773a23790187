#include "lmhet/panel.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace lmhet {

void validate_panel(const DataPanel& panel) {
  const Index n = panel.values.rows();
  const Index t = panel.values.cols();
  if (n < 2 || t < 2)
    throw InputError("panel must have at least 2 series and 2 periods, got " +
                     std::to_string(n) + "x" + std::to_string(t));
  if (!panel.values.allFinite())
    throw InputError("panel contains non-finite values");
  if (!panel.series_ids.empty()) {
    if (static_cast<Index>(panel.series_ids.size()) != n)
      throw InputError("panel has " + std::to_string(n) + " rows but " +
                       std::to_string(panel.series_ids.size()) + " series ids");
    std::unordered_set<std::string> seen;
    for (const auto& id : panel.series_ids) {
      if (id.empty()) throw InputError("empty series id");
      if (!seen.insert(id).second) throw InputError("duplicate series id '" + id + "'");
    }
  }
}

DataPanel make_panel(Matrix values, std::vector<std::string> series_ids) {
  DataPanel panel{std::move(values), std::move(series_ids)};
  validate_panel(panel);
  return panel;
}

GroupStructure make_contiguous_groups(const std::vector<int>& sizes,
                                      std::vector<std::string> names) {
  if (sizes.size() < 2)
    throw InsufficientGroupsError("need at least 2 groups, got " +
                                  std::to_string(sizes.size()));
  if (!names.empty() && names.size() != sizes.size())
    throw InputError("group name count does not match group count");
  GroupStructure g;
  g.sizes = sizes;
  int total = 0;
  for (std::size_t j = 0; j < sizes.size(); ++j) {
    if (sizes[j] < 1)
      throw InputError("group " + std::to_string(j) + " is empty");
    total += sizes[j];
    g.boundaries.push_back(total);
  }
  for (int nj : sizes) g.shares.push_back(static_cast<double>(nj) / total);
  if (names.empty())
    for (std::size_t j = 0; j < sizes.size(); ++j)
      g.names.push_back("G" + std::to_string(j + 1));
  else
    g.names = std::move(names);
  return g;
}

GroupingResult group_structure(const std::vector<std::string>& tags) {
  if (tags.empty()) throw InputError("no group tags supplied");
  std::unordered_map<std::string, int> group_of;
  std::vector<std::string> names;
  std::vector<std::vector<int>> members;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const auto& tag = tags[i];
    if (tag.empty())
      throw InputError("variable " + std::to_string(i) + " has an empty group tag");
    auto [it, inserted] = group_of.try_emplace(tag, static_cast<int>(names.size()));
    if (inserted) {
      names.push_back(tag);
      members.emplace_back();
    }
    members[it->second].push_back(static_cast<int>(i));
  }
  if (names.size() < 2)
    throw InsufficientGroupsError("need at least 2 distinct group tags, got " +
                                  std::to_string(names.size()));
  std::vector<int> sizes;
  GroupingResult out;
  for (std::size_t j = 0; j < members.size(); ++j) {
    sizes.push_back(static_cast<int>(members[j].size()));
    out.permutation.insert(out.permutation.end(), members[j].begin(), members[j].end());
  }
  out.groups = make_contiguous_groups(sizes, std::move(names));
  return out;
}

DataPanel apply_permutation(const DataPanel& panel, const std::vector<int>& perm) {
  const Index n = panel.values.rows();
  if (static_cast<Index>(perm.size()) != n)
    throw InputError("permutation length " + std::to_string(perm.size()) +
                     " does not match row count " + std::to_string(n));
  std::vector<char> hit(perm.size(), 0);
  for (int p : perm) {
    if (p < 0 || p >= n || hit[p])
      throw InputError("permutation is not a bijection on 0.." + std::to_string(n - 1));
    hit[p] = 1;
  }
  DataPanel out;
  out.values.resize(n, panel.values.cols());
  for (Index i = 0; i < n; ++i) out.values.row(i) = panel.values.row(perm[i]);
  if (!panel.series_ids.empty()) {
    out.series_ids.resize(perm.size());
    for (Index i = 0; i < n; ++i) out.series_ids[i] = panel.series_ids[perm[i]];
  }
  return out;
}

}  // namespace lmhet
