#include "osrlab/osr.hpp"

#include <algorithm>
#include <climits>

namespace osrlab {

const char* mode_name(ReconstructMode mode) {
  return mode == ReconstructMode::Live ? "live" : "avail";
}

AliasFacts AliasFacts::from_log(const ActionLog& log) {
  AliasFacts facts;
  for (const Action& action : log) {
    if (const auto* rep = std::get_if<ReplaceOperand>(&action))
      facts.renames.emplace_back(rep->old_op, rep->new_op);
    else if (const auto* all = std::get_if<ReplaceAllUses>(&action))
      facts.renames.emplace_back(all->old_op, all->new_op);
  }
  return facts;
}

Expr AliasFacts::normalize(const Expr& e) const {
  Expr out = e;
  for (const auto& [old_op, new_op] : renames) out = substitute_expr(out, old_op, new_op);
  return out;
}

namespace {

// Dead source variable that still holds the value the destination
// definition would have produced: unique reaching definitions on both
// sides whose defining instructions agree (same assignment up to recorded
// operand renames, or the same in-binding).
bool avail_qualifies(const std::string& x, const Dataflow& src, int src_point, const Dataflow& dst,
                     std::optional<int> dst_def, const AliasFacts& aliases) {
  if (!dst_def) return false;
  if (!src.def_assigned(src_point).count(x)) return false;
  auto src_def = src.unique_reaching_def(src_point, x);
  if (!src_def) return false;
  const Instr& si = src.program().at(*src_def);
  const Instr& di = dst.program().at(*dst_def);
  const auto* sa = std::get_if<Assign>(&si);
  const auto* da = std::get_if<Assign>(&di);
  if (sa && da)
    return sa->target == da->target &&
           aliases.normalize(sa->rhs) == aliases.normalize(da->rhs);
  return std::holds_alternative<In>(si) && std::holds_alternative<In>(di);
}

std::vector<std::string> ordered_by_def_point(const std::set<std::string>& vars,
                                              const Dataflow& dst, int at) {
  std::vector<std::string> out(vars.begin(), vars.end());
  std::stable_sort(out.begin(), out.end(), [&](const std::string& a, const std::string& b) {
    auto da = dst.unique_reaching_def(at, a);
    auto db = dst.unique_reaching_def(at, b);
    int pa = da ? *da : INT_MAX;
    int pb = db ? *db : INT_MAX;
    if (pa != pb) return pa < pb;
    return a < b;
  });
  return out;
}

}  // namespace

std::vector<Instr> reconstruct(const std::string& x, const Dataflow& src, int src_point,
                               const Dataflow& dst, int dst_point, int dst_query,
                               ReconstructMode mode, std::set<int>& visited,
                               std::set<std::string>& keep, const AliasFacts& aliases) {
  // pool leaf: a source-live variable is read straight from the inputs
  if (src.live(src_point).count(x)) return {};

  auto dst_def = dst.unique_reaching_def(dst_query, x);
  if (dst_def && visited.count(*dst_def)) return {};

  // keeping a stale value is a last resort: try to recompute first
  std::set<int> visited_before = visited;
  std::set<std::string> keep_before = keep;
  try {
    if (!dst_def)
      throw ReconstructFailed("no unique reaching definition of " + x +
                              " at destination point " + std::to_string(dst_query));
    const auto* assign = std::get_if<Assign>(&dst.program().at(*dst_def));
    if (!assign)
      throw ReconstructFailed(x + " is bound by `in` at the destination; outside the " +
                              mode_name(mode) + " pool at the source");
    visited.insert(*dst_def);

    std::vector<Instr> body;
    for (const std::string& y : ordered_by_def_point(expr_vars(assign->rhs), dst, *dst_def)) {
      auto part = reconstruct(y, src, src_point, dst, dst_point, *dst_def, mode, visited, keep,
                              aliases);
      body.insert(body.end(), part.begin(), part.end());
    }
    body.push_back(Assign{x, assign->rhs});
    return body;
  } catch (const ReconstructFailed&) {
    if (mode == ReconstructMode::Avail &&
        avail_qualifies(x, src, src_point, dst, dst_def, aliases)) {
      visited = std::move(visited_before);
      keep = std::move(keep_before);
      keep.insert(x);
      return {};
    }
    throw;
  }
}

std::optional<BuildCompResult> build_comp(const Program& src, int src_point, const Program& dst,
                                          int dst_point, ReconstructMode mode,
                                          const AliasFacts& aliases) {
  auto src_df = analyze(src);
  auto dst_df = analyze(dst);
  const auto& src_live = src_df->live(src_point);
  const auto& dst_live = dst_df->live(dst_point);

  std::set<std::string> missing;
  for (const auto& x : dst_live)
    if (!src_live.count(x)) missing.insert(x);

  std::vector<Instr> body;
  std::set<int> visited;
  std::set<std::string> keep;
  try {
    for (const std::string& x : ordered_by_def_point(missing, *dst_df, dst_point)) {
      auto part = reconstruct(x, *src_df, src_point, *dst_df, dst_point, dst_point, mode, visited,
                              keep, aliases);
      body.insert(body.end(), part.begin(), part.end());
    }
  } catch (const ReconstructFailed&) {
    return std::nullopt;
  }

  std::set<std::string> in_set = src_live;
  in_set.insert(keep.begin(), keep.end());
  std::vector<Instr> instrs;
  instrs.push_back(In{{in_set.begin(), in_set.end()}});
  instrs.insert(instrs.end(), body.begin(), body.end());
  instrs.push_back(Out{{dst_live.begin(), dst_live.end()}});
  return BuildCompResult{CompCode{Program::make(std::move(instrs))}, std::move(keep)};
}

namespace {

OsrMapping build_mapping(const Program& src, const Program& dst, const PointMap& points,
                         ReconstructMode mode, const AliasFacts& aliases) {
  OsrMapping mapping;
  mapping.mode = mode;
  for (const auto& [from, to] : points) {
    auto result = build_comp(src, from, dst, to, mode, aliases);
    if (!result) continue;  // point not eligible for a transition
    mapping.entries.emplace(from, MappingEntry{to, std::move(result->comp)});
    if (!result->keep.empty()) mapping.keep_sets.emplace(from, std::move(result->keep));
  }
  return mapping;
}

}  // namespace

std::optional<OsrTransResult> osr_trans(const Program& p, const RewriteRule& rule,
                                        ReconstructMode mode) {
  auto applied = apply_rule(p, rule);
  if (!applied) return std::nullopt;
  AliasFacts aliases = AliasFacts::from_log(applied->log);
  OsrTransResult result{applied->program,
                        build_mapping(p, applied->program, applied->fwd, mode, aliases),
                        build_mapping(applied->program, p, applied->bwd, mode, aliases),
                        applied->log};
  return result;
}

OsrMapping identity_mapping(const Program& p, ReconstructMode mode) {
  return build_mapping(p, p, identity_point_map(p.size()), mode, {});
}

OsrMapping compose_mappings(const OsrMapping& first, const OsrMapping& second,
                            std::vector<ComposeDiagnostic>* diagnostics) {
  OsrMapping out;
  out.mode = first.mode;
  for (const auto& [point, entry] : first.entries) {
    auto mid = second.entries.find(entry.target);
    if (mid == second.entries.end()) continue;
    try {
      CompCode composed{compose_programs(entry.comp.code, mid->second.comp.code)};
      out.entries.emplace(point, MappingEntry{mid->second.target, std::move(composed)});
      auto keep = first.keep_sets.find(point);
      if (keep != first.keep_sets.end()) out.keep_sets.emplace(point, keep->second);
    } catch (const NotComposable& e) {
      if (diagnostics) diagnostics->push_back(ComposeDiagnostic{point, e.what()});
    }
  }
  return out;
}

DoPassesResult do_passes(const Program& p, const std::vector<PipelineItem>& pipeline,
                         ReconstructMode mode) {
  DoPassesResult acc{p, identity_mapping(p, mode), identity_mapping(p, mode), {}};
  for (const PipelineItem& item : pipeline) {
    bool matched_once = false;
    while (true) {
      auto pass = osr_trans(acc.program, item.rule, mode);
      if (!pass) break;
      matched_once = true;
      acc.program = pass->program;
      acc.fwd = compose_mappings(acc.fwd, pass->fwd);
      acc.bwd = compose_mappings(pass->bwd, acc.bwd);
      if (!item.exhaustive) break;
    }
    if (!matched_once)
      acc.skipped.push_back(item.rule.name + (item.exhaustive ? "*" : ""));
  }
  return acc;
}

// -- feasibility reporting ---------------------------------------------------

const char* point_class_name(PointClass c) {
  switch (c) {
    case PointClass::EmptyComp: return "empty_comp";
    case PointClass::FeasibleLive: return "feasible_live";
    case PointClass::FeasibleAvailOnly: return "feasible_avail_only";
    case PointClass::Infeasible: return "infeasible";
  }
  return "?";
}

double FeasibilityReport::fraction(PointClass c) const {
  if (points.empty()) return 0.0;
  int count = 0;
  for (const auto& [point, cls] : points)
    if (cls == c) ++count;
  return static_cast<double>(count) / static_cast<double>(points.size());
}

double FeasibilityReport::avg_body_size(ReconstructMode mode) const {
  const auto& sizes = mode == ReconstructMode::Live ? live_body_sizes : avail_body_sizes;
  if (sizes.empty()) return 0.0;
  double total = 0;
  for (const auto& [point, size] : sizes) total += size;
  return total / static_cast<double>(sizes.size());
}

int FeasibilityReport::max_body_size(ReconstructMode mode) const {
  const auto& sizes = mode == ReconstructMode::Live ? live_body_sizes : avail_body_sizes;
  int best = 0;
  for (const auto& [point, size] : sizes) best = std::max(best, size);
  return best;
}

double FeasibilityReport::avg_keep_size() const {
  if (keep_sizes.empty()) return 0.0;
  double total = 0;
  for (const auto& [point, size] : keep_sizes) total += size;
  return total / static_cast<double>(keep_sizes.size());
}

int FeasibilityReport::max_keep_size() const {
  int best = 0;
  for (const auto& [point, size] : keep_sizes) best = std::max(best, size);
  return best;
}

FeasibilityReport feasibility_report(const Program& src, const Program& dst,
                                     const AliasFacts& aliases, const PointMap* correspondence) {
  PointMap points = correspondence ? *correspondence : identity_point_map(src.size());
  FeasibilityReport report;
  for (const auto& [from, to] : points) {
    auto live = build_comp(src, from, dst, to, ReconstructMode::Live, aliases);
    auto avail = build_comp(src, from, dst, to, ReconstructMode::Avail, aliases);
    PointClass cls;
    if (live && live->comp.empty_body()) cls = PointClass::EmptyComp;
    else if (live) cls = PointClass::FeasibleLive;
    else if (avail) cls = PointClass::FeasibleAvailOnly;
    else cls = PointClass::Infeasible;
    report.points.emplace(from, cls);
    if (live) report.live_body_sizes.emplace(from, live->comp.body_size());
    if (avail) {
      report.avail_body_sizes.emplace(from, avail->comp.body_size());
      report.keep_sizes.emplace(from, static_cast<int>(avail->keep.size()));
    }
  }
  return report;
}

OrderedJson FeasibilityReport::to_json() const {
  OrderedJson entries = OrderedJson::array();
  for (const auto& [point, cls] : points) {
    OrderedJson entry;
    entry["point"] = point;
    entry["class"] = point_class_name(cls);
    if (auto it = live_body_sizes.find(point); it != live_body_sizes.end())
      entry["live_body"] = it->second;
    if (auto it = avail_body_sizes.find(point); it != avail_body_sizes.end())
      entry["avail_body"] = it->second;
    if (auto it = keep_sizes.find(point); it != keep_sizes.end()) entry["keep"] = it->second;
    entries.push_back(std::move(entry));
  }
  OrderedJson out;
  out["points"] = std::move(entries);
  OrderedJson fractions;
  for (PointClass c : {PointClass::EmptyComp, PointClass::FeasibleLive,
                       PointClass::FeasibleAvailOnly, PointClass::Infeasible})
    fractions[point_class_name(c)] = fraction(c);
  out["fractions"] = std::move(fractions);
  out["live"] = OrderedJson{{"feasible_points", live_body_sizes.size()},
                            {"avg_body", avg_body_size(ReconstructMode::Live)},
                            {"max_body", max_body_size(ReconstructMode::Live)}};
  out["avail"] = OrderedJson{{"feasible_points", avail_body_sizes.size()},
                             {"avg_body", avg_body_size(ReconstructMode::Avail)},
                             {"max_body", max_body_size(ReconstructMode::Avail)},
                             {"avg_keep", avg_keep_size()},
                             {"max_keep", max_keep_size()}};
  return out;
}

OrderedJson mapping_json(const OsrMapping& mapping, int src_version, int dst_version) {
  OrderedJson out;
  out["src_version"] = src_version;
  out["dst_version"] = dst_version;
  out["mode"] = mode_name(mapping.mode);
  OrderedJson entries = OrderedJson::array();
  for (const auto& [point, entry] : mapping.entries) {
    OrderedJson item;
    item["src"] = point;
    item["dst"] = entry.target;
    OrderedJson keep = OrderedJson::array();
    if (auto it = mapping.keep_sets.find(point); it != mapping.keep_sets.end())
      for (const auto& x : it->second) keep.push_back(x);
    item["keep"] = std::move(keep);
    OrderedJson comp = OrderedJson::array();
    for (int i = 1; i <= entry.comp.code.size(); ++i)
      comp.push_back(instr_str(entry.comp.code.at(i)));
    item["comp"] = std::move(comp);
    entries.push_back(std::move(item));
  }
  out["entries"] = std::move(entries);
  return out;
}

}  // namespace osrlab
