#include "hitex/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <set>
#include <sstream>

#include "hitex/error.hpp"

namespace hitex {

using nlohmann::json;

namespace {

double mean(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_stdev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = mean(v), ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

template <typename M>
double mean_of_values(const M& m) {
  std::vector<double> v;
  for (const auto& [k, x] : m) v.push_back(x);
  return mean(v);
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw LoadError("missing required column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - header.begin());
  }
  std::optional<std::size_t> find(std::string_view name) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  }
};

CsvTable read_csv(std::string_view text) {
  CsvTable t;
  t.rows = parse_csv(text, t.header);
  return t;
}

std::string row_where(std::size_t r) { return "data row " + std::to_string(r + 1); }

int parse_score(const std::string& field, std::size_t r, std::string_view column) {
  try {
    std::size_t used = 0;
    int v = std::stoi(field, &used);
    if (used == field.size() && v >= 1 && v <= 4) return v;
  } catch (const std::exception&) {
  }
  throw LoadError(row_where(r) + ": " + std::string(column) + " must be an integer 1-4, got '" + field + "'");
}

bool parse_bool(const std::string& field, std::size_t r) {
  if (field == "1" || field == "true" || field == "TRUE" || field == "yes") return true;
  if (field == "0" || field == "false" || field == "FALSE" || field == "no") return false;
  throw LoadError(row_where(r) + ": correct must be 0/1 or true/false, got '" + field + "'");
}

CefrLevel parse_level(const std::string& field, std::size_t r) {
  auto level = parse_cefr(field);
  if (!level) throw LoadError(row_where(r) + ": unknown CEFR level '" + field + "'");
  return *level;
}

DistanceColumn bucket(const std::vector<double>& distances) {
  DistanceColumn c;
  c.sentences = static_cast<int>(distances.size());
  if (distances.empty()) return c;
  std::array<int, 4> counts{};
  for (double d : distances) counts[static_cast<std::size_t>(std::min<long>(std::lround(d), 3))] += 1;
  for (std::size_t i = 0; i < 4; ++i) c.percent[i] = 100.0 * counts[i] / static_cast<double>(distances.size());
  return c;
}

std::string fmt(double v, int digits = 2) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << v;
  return out.str();
}

}  // namespace

std::vector<std::vector<std::string>> parse_csv(std::string_view text, std::vector<std::string>& header) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false, any = false;
  std::size_t line = 1;
  auto end_record = [&] {
    record.push_back(std::move(field));
    field.clear();
    bool blank = record.size() == 1 && record[0].empty();
    if (!blank) records.push_back(std::move(record));
    record.clear();
    any = false;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    if (c == '"' && field.empty()) {
      quoted = true;
      any = true;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\r') {
      continue;
    } else if (c == '\n') {
      end_record();
      ++line;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw LoadError("line " + std::to_string(line) + ": unterminated quoted field");
  if (any || !field.empty()) end_record();
  if (records.empty()) throw LoadError("CSV input has no header row");
  header = std::move(records.front());
  records.erase(records.begin());
  for (std::size_t r = 0; r < records.size(); ++r) {
    if (records[r].size() != header.size()) {
      throw LoadError(row_where(r) + ": expected " + std::to_string(header.size()) + " fields, got " +
                      std::to_string(records[r].size()));
    }
  }
  return records;
}

std::vector<RatingRecord> parse_ratings_csv(std::string_view text) {
  auto t = read_csv(text);
  auto rater = t.column("rater"), sentence = t.column("sentence"), l2 = t.column("l2"), ctx = t.column("ctx");
  auto overall = t.find("overall"), level = t.find("level");
  std::vector<RatingRecord> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    RatingRecord rec;
    rec.rater = row[rater];
    rec.sentence = row[sentence];
    if (rec.rater.empty() || rec.sentence.empty()) throw LoadError(row_where(r) + ": rater and sentence are required");
    rec.l2 = parse_score(row[l2], r, "l2");
    rec.ctx = parse_score(row[ctx], r, "ctx");
    if (overall && !row[*overall].empty()) rec.overall = parse_score(row[*overall], r, "overall");
    if (level && !row[*level].empty()) rec.level = parse_level(row[*level], r);
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<ResponseRecord> parse_responses_csv(std::string_view text) {
  auto t = read_csv(text);
  auto student = t.column("student"), level = t.column("level"), exercise = t.column("exercise"),
       item = t.column("item"), answer = t.column("answer"), correct = t.column("correct");
  std::vector<ResponseRecord> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    if (row[exercise].empty() || row[item].empty()) throw LoadError(row_where(r) + ": exercise and item are required");
    out.push_back({row[student], parse_level(row[level], r), row[exercise], row[item], row[answer],
                   parse_bool(row[correct], r)});
  }
  return out;
}

std::vector<ItemInfo> parse_items_csv(std::string_view text) {
  auto t = read_csv(text);
  auto exercise = t.column("exercise"), item = t.column("item"), mode = t.column("mode"), level = t.column("level"),
       pos = t.column("pos");
  std::vector<ItemInfo> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    out.push_back({row[exercise], row[item], row[mode], parse_level(row[level], r), row[pos]});
  }
  return out;
}

std::map<std::string, CefrLevel> parse_levels_csv(std::string_view text) {
  auto t = read_csv(text);
  auto sentence = t.column("sentence"), level = t.column("level");
  std::map<std::string, CefrLevel> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) out[t.rows[r][sentence]] = parse_level(t.rows[r][level], r);
  return out;
}

std::map<ItemKey, ItemStats> item_difficulty(const std::vector<ResponseRecord>& responses) {
  std::map<ItemKey, ItemStats> out;
  for (const auto& r : responses) {
    auto& s = out[{r.exercise, r.item}];
    s.total += 1;
    s.correct += r.correct ? 1 : 0;
  }
  return out;
}

DifficultyTable difficulty_table(const std::vector<ResponseRecord>& responses, const std::vector<ItemInfo>& items) {
  DifficultyTable t;
  std::map<ItemKey, const ItemInfo*> info;
  for (const auto& i : items) info[{i.exercise, i.item}] = &i;

  std::vector<double> all;
  for (const auto& [key, stats] : item_difficulty(responses)) all.push_back(stats.difficulty());
  t.all_items_average = mean(all);

  std::map<ItemKey, ItemStats> matched;
  std::set<ItemKey> unknown;
  for (const auto& r : responses) {
    ItemKey key{r.exercise, r.item};
    auto it = info.find(key);
    if (it == info.end()) {
      if (unknown.insert(key).second) t.warnings.push_back("no item metadata for " + key.first + "/" + key.second);
      continue;
    }
    auto& s = matched[key];
    if (r.level != it->second->level) continue;
    s.total += 1;
    s.correct += r.correct ? 1 : 0;
  }

  std::map<std::string, std::map<std::string, std::map<CefrLevel, std::vector<double>>>> grouped;
  for (const auto& [key, stats] : matched) {
    if (stats.total == 0) {
      t.warnings.push_back("item " + key.first + "/" + key.second + " has no responses at its own level");
      continue;
    }
    const auto* i = info.at(key);
    grouped[i->mode][i->pos][i->level].push_back(stats.difficulty());
  }
  for (const auto& [mode, by_pos] : grouped) {
    for (const auto& [pos, by_level] : by_pos) {
      for (const auto& [level, values] : by_level) t.cells[mode][pos][level] = mean(values);
    }
  }
  for (const auto& [mode, by_pos] : t.cells) {
    std::map<CefrLevel, std::vector<double>> per_level;
    std::vector<double> every_cell;
    for (const auto& [pos, by_level] : by_pos) {
      t.pos_average[mode][pos] = mean_of_values(by_level);
      for (const auto& [level, v] : by_level) {
        per_level[level].push_back(v);
        every_cell.push_back(v);
      }
    }
    for (const auto& [level, values] : per_level) t.level_average[mode][level] = mean(values);
    // every cell counts once, so sparse rows do not get extra weight
    t.mode_average[mode] = mean(every_cell);
  }
  if (!t.mode_average.empty()) t.overall = mean_of_values(t.mode_average);
  return t;
}

double ideal_item_difficulty(double p_chance) {
  if (!(p_chance >= 0.0 && p_chance <= 1.0)) throw Error("chance probability must lie in [0, 1]");
  return p_chance + (1.0 - p_chance) / 2.0;
}

double chance_probability(int n_items, int n_options) {
  if (n_items < 1 || n_options < n_items) throw Error("need n_options >= n_items >= 1");
  double sum = 0.0;
  for (int i = 1; i <= n_items; ++i) sum += 1.0 / (n_options - i + 1);
  return sum / n_items;
}

std::string_view to_string(AlphaMetric m) { return m == AlphaMetric::nominal ? "nominal" : "interval"; }

std::optional<AlphaMetric> parse_alpha_metric(std::string_view text) {
  if (text == "nominal") return AlphaMetric::nominal;
  if (text == "interval" || text == "ordinal-distance" || text == "ordinal") return AlphaMetric::interval;
  return std::nullopt;
}

double krippendorff_alpha(const RatingMatrix& ratings, AlphaMetric metric) {
  std::size_t units = 0;
  for (const auto& row : ratings) units = std::max(units, row.size());

  std::map<double, std::size_t> index;
  std::vector<std::vector<double>> pairable;
  for (std::size_t u = 0; u < units; ++u) {
    std::vector<double> values;
    for (const auto& row : ratings) {
      if (u < row.size() && row[u]) values.push_back(*row[u]);
    }
    if (values.size() < 2) continue;
    for (double v : values) index.try_emplace(v, 0);
    pairable.push_back(std::move(values));
  }
  if (pairable.size() < 2) throw Error("alpha needs at least two units with two or more ratings");

  std::vector<double> categories;
  for (auto& [v, i] : index) {
    i = categories.size();
    categories.push_back(v);
  }
  const std::size_t k = categories.size();
  std::vector<double> o(k * k, 0.0);
  for (const auto& values : pairable) {
    const double w = 1.0 / static_cast<double>(values.size() - 1);
    for (std::size_t a = 0; a < values.size(); ++a) {
      for (std::size_t b = 0; b < values.size(); ++b) {
        if (a != b) o[index[values[a]] * k + index[values[b]]] += w;
      }
    }
  }
  std::vector<double> n_c(k, 0.0);
  double n = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t d = 0; d < k; ++d) n_c[c] += o[c * k + d];
    n += n_c[c];
  }
  auto delta = [&](std::size_t c, std::size_t d) {
    if (metric == AlphaMetric::nominal) return c == d ? 0.0 : 1.0;
    double diff = categories[c] - categories[d];
    return diff * diff;
  };
  double observed = 0.0, expected = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t d = 0; d < k; ++d) {
      observed += o[c * k + d] * delta(c, d);
      expected += n_c[c] * n_c[d] * delta(c, d);
    }
  }
  // Every rating the same value: no disagreement is possible.
  if (expected == 0.0) return 1.0;
  return 1.0 - (n - 1.0) * observed / expected;
}

std::vector<double> average_ranks(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = r;
    i = j + 1;
  }
  return ranks;
}

double spearman_rho(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw Error("spearman_rho needs equal-length inputs");
  if (x.size() < 3) throw Error("spearman_rho needs at least 3 pairs");
  auto rx = average_ranks(x), ry = average_ranks(y);
  double mx = mean(rx), my = mean(ry), sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw Error("spearman_rho is undefined for a constant input");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

DistanceColumn teacher_teacher_distances(const std::vector<LevelAssignment>& assignments) {
  std::vector<double> distances;
  for (const auto& a : assignments) {
    const auto& t = a.teachers;
    if (t.size() < 2) continue;
    double sum = 0.0;
    int pairs = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      for (std::size_t j = i + 1; j < t.size(); ++j) {
        sum += level_distance(t[i], t[j]);
        ++pairs;
      }
    }
    distances.push_back(sum / pairs);
  }
  return bucket(distances);
}

DistanceColumn teacher_system_distances(const std::vector<LevelAssignment>& assignments) {
  std::vector<double> distances;
  for (const auto& a : assignments) {
    if (!a.system || a.teachers.empty()) continue;
    double sum = 0.0;
    for (auto t : a.teachers) sum += level_distance(t, *a.system);
    distances.push_back(sum / static_cast<double>(a.teachers.size()));
  }
  return bucket(distances);
}

std::vector<LevelAssignment> level_assignments(const std::vector<RatingRecord>& ratings,
                                               const std::map<std::string, CefrLevel>& system_levels) {
  std::vector<LevelAssignment> out;
  std::map<std::string, std::size_t> at;
  for (const auto& r : ratings) {
    auto [it, fresh] = at.try_emplace(r.sentence, out.size());
    if (fresh) {
      LevelAssignment a{r.sentence, {}, std::nullopt};
      if (auto s = system_levels.find(r.sentence); s != system_levels.end()) a.system = s->second;
      out.push_back(std::move(a));
    }
    auto& a = out[it->second];
    if (r.level) a.teachers.push_back(*r.level);
    else if (a.system) a.teachers.push_back(*a.system);
  }
  return out;
}

RatingMatrix level_matrix(const std::vector<RatingRecord>& ratings,
                          const std::map<std::string, CefrLevel>& system_levels) {
  std::map<std::string, std::size_t> raters, units;
  for (const auto& r : ratings) {
    raters.try_emplace(r.rater, raters.size());
    units.try_emplace(r.sentence, units.size());
  }
  RatingMatrix m(raters.size(), std::vector<std::optional<double>>(units.size()));
  for (const auto& r : ratings) {
    std::optional<CefrLevel> level = r.level;
    if (!level) {
      if (auto s = system_levels.find(r.sentence); s != system_levels.end()) level = s->second;
    }
    if (level) m[raters[r.rater]][units[r.sentence]] = ordinal(*level);
  }
  return m;
}

RatingsReport ratings_report(const std::vector<RatingRecord>& ratings,
                             const std::map<std::string, CefrLevel>& system_levels, double threshold,
                             AlphaMetric metric) {
  RatingsReport rep;
  rep.threshold = threshold;
  rep.metric = metric;
  if (ratings.empty()) throw Error("no ratings supplied");

  struct PerSentence {
    std::vector<double> l2, ctx, overall;
  };
  std::vector<std::string> order;
  std::map<std::string, PerSentence> per;
  std::set<std::string> raters_l2, raters_overall;
  for (const auto& r : ratings) {
    if (!per.contains(r.sentence)) order.push_back(r.sentence);
    auto& p = per[r.sentence];
    p.l2.push_back(r.l2);
    p.ctx.push_back(r.ctx);
    raters_l2.insert(r.rater);
    if (r.overall) {
      p.overall.push_back(*r.overall);
      raters_overall.insert(r.rater);
    }
  }

  std::vector<double> l2_means, ctx_means, overall_means, l2_paired, ctx_paired;
  int suitable = 0, half_high = 0;
  for (const auto& id : order) {
    const auto& p = per[id];
    l2_means.push_back(mean(p.l2));
    ctx_means.push_back(mean(p.ctx));
    if (ctx_means.back() > threshold) ++suitable;
    auto high = std::count_if(p.ctx.begin(), p.ctx.end(), [](double v) { return v >= 3; });
    if (2 * static_cast<std::size_t>(high) >= p.ctx.size()) ++half_high;
    if (!p.overall.empty()) {
      overall_means.push_back(mean(p.overall));
      l2_paired.push_back(l2_means.back());
      ctx_paired.push_back(ctx_means.back());
    }
  }
  const auto nsent = static_cast<double>(order.size());
  rep.criteria.push_back({"l2_complexity", static_cast<int>(raters_l2.size()), mean(l2_means), sample_stdev(l2_means)});
  rep.criteria.push_back(
      {"context_independence", static_cast<int>(raters_l2.size()), mean(ctx_means), sample_stdev(ctx_means)});
  if (!overall_means.empty()) {
    rep.criteria.push_back(
        {"overall", static_cast<int>(raters_overall.size()), mean(overall_means), sample_stdev(overall_means)});
  }
  rep.ctx_suitable_share = suitable / nsent;
  rep.ctx_half_high_share = half_high / nsent;

  try {
    rep.alpha = krippendorff_alpha(level_matrix(ratings, system_levels), metric);
  } catch (const Error& e) {
    rep.warnings.push_back(std::string("alpha: ") + e.what());
  }
  auto correlate = [&](const std::vector<double>& x, std::optional<double>& out, const char* name) {
    try {
      out = spearman_rho(x, overall_means);
    } catch (const Error& e) {
      rep.warnings.push_back(std::string(name) + ": " + e.what());
    }
  };
  if (!overall_means.empty()) {
    correlate(l2_paired, rep.rho_l2_overall, "rho(l2, overall)");
    correlate(ctx_paired, rep.rho_ctx_overall, "rho(ctx, overall)");
  }

  auto assignments = level_assignments(ratings, system_levels);
  rep.teacher_teacher = teacher_teacher_distances(assignments);
  if (!system_levels.empty()) {
    rep.teacher_system = teacher_system_distances(assignments);
    int exact = 0, any = 0, counted = 0;
    for (const auto& a : assignments) {
      if (!a.system || a.teachers.empty()) continue;
      ++counted;
      double m = 0.0;
      for (auto t : a.teachers) m += ordinal(t);
      m /= static_cast<double>(a.teachers.size());
      if (std::lround(m) == ordinal(*a.system)) ++exact;
      if (std::find(a.teachers.begin(), a.teachers.end(), *a.system) != a.teachers.end()) ++any;
    }
    if (counted > 0) {
      rep.system_exact_share = static_cast<double>(exact) / counted;
      rep.system_any_teacher_share = static_cast<double>(any) / counted;
    }
  }
  return rep;
}

AlphaBlocks alpha_by_block(const std::vector<std::pair<std::string, std::vector<RatingRecord>>>& blocks,
                           const std::map<std::string, CefrLevel>& system_levels, AlphaMetric metric) {
  AlphaBlocks out;
  std::vector<double> values;
  for (const auto& [name, ratings] : blocks) {
    double a = krippendorff_alpha(level_matrix(ratings, system_levels), metric);
    out.blocks.emplace_back(name, a);
    values.push_back(a);
  }
  out.average = mean(values);
  return out;
}

json to_json(const DistanceColumn& c) {
  return {{"sentences", c.sentences},
          {"percent", {{"0", c.percent[0]}, {"1", c.percent[1]}, {"2", c.percent[2]}, {">=3", c.percent[3]}}}};
}

json to_json(const RatingsReport& r) {
  json criteria = json::array();
  for (const auto& c : r.criteria) {
    criteria.push_back({{"criterion", c.name}, {"raters", c.raters}, {"average", c.average}, {"stdev", c.stdev}});
  }
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json j{{"criteria", criteria},
         {"threshold", r.threshold},
         {"ctx_suitable_share", r.ctx_suitable_share},
         {"ctx_half_high_share", r.ctx_half_high_share},
         {"alpha", opt(r.alpha)},
         {"alpha_metric", std::string(to_string(r.metric))},
         {"rho_l2_overall", opt(r.rho_l2_overall)},
         {"rho_ctx_overall", opt(r.rho_ctx_overall)},
         {"system_exact_share", opt(r.system_exact_share)},
         {"system_any_teacher_share", opt(r.system_any_teacher_share)},
         {"warnings", r.warnings}};
  j["level_distance"] = {{"teacher_teacher", r.teacher_teacher ? to_json(*r.teacher_teacher) : json(nullptr)},
                         {"teacher_system", r.teacher_system ? to_json(*r.teacher_system) : json(nullptr)}};
  return j;
}

json to_json(const DifficultyTable& t) {
  json cells = json::object();
  for (const auto& [mode, by_pos] : t.cells) {
    for (const auto& [pos, by_level] : by_pos) {
      for (const auto& [level, v] : by_level) cells[mode][pos][std::string(to_string(level))] = v;
    }
  }
  json level_avg = json::object();
  for (const auto& [mode, by_level] : t.level_average) {
    for (const auto& [level, v] : by_level) level_avg[mode][std::string(to_string(level))] = v;
  }
  return {{"cells", cells},
          {"pos_average", t.pos_average},
          {"level_average", level_avg},
          {"mode_average", t.mode_average},
          {"overall", t.overall ? json(*t.overall) : json(nullptr)},
          {"all_items_average", t.all_items_average},
          {"warnings", t.warnings}};
}

std::string to_markdown(const RatingsReport& r) {
  std::ostringstream out;
  out << "| Criterion | # of raters | Average | StDev |\n|---|---|---|---|\n";
  for (const auto& c : r.criteria) {
    out << "| " << c.name << " | " << c.raters << " | " << fmt(c.average) << " | " << fmt(c.stdev) << " |\n";
  }
  out << "\nContext independence above " << fmt(r.threshold, 1) << ": " << fmt(100 * r.ctx_suitable_share, 1)
      << "% of sentences; 3 or 4 from at least half of the raters: " << fmt(100 * r.ctx_half_high_share, 1) << "%\n";
  if (r.alpha) out << "\nKrippendorff's alpha (" << to_string(r.metric) << "): " << fmt(*r.alpha) << "\n";
  if (r.rho_l2_overall) out << "Spearman rho, L2 complexity vs overall: " << fmt(*r.rho_l2_overall) << "\n";
  if (r.rho_ctx_overall) out << "Spearman rho, context independence vs overall: " << fmt(*r.rho_ctx_overall) << "\n";
  if (r.teacher_teacher) {
    out << "\n| Level distance | Teacher - Teacher | Teacher - System |\n|---|---|---|\n";
    const char* labels[] = {"0", "1", "2", ">= 3"};
    for (std::size_t i = 0; i < 4; ++i) {
      out << "| " << labels[i] << " | " << fmt(r.teacher_teacher->percent[i], 1) << " | "
          << (r.teacher_system ? fmt(r.teacher_system->percent[i], 1) : "-") << " |\n";
    }
  }
  for (const auto& w : r.warnings) out << "\nwarning: " << w;
  if (!r.warnings.empty()) out << "\n";
  return out.str();
}

std::string to_markdown(const DifficultyTable& t) {
  std::ostringstream out;
  std::set<CefrLevel> levels;
  std::set<std::string> pos_names;
  for (const auto& [mode, by_pos] : t.cells) {
    for (const auto& [pos, by_level] : by_pos) {
      pos_names.insert(pos);
      for (const auto& [level, v] : by_level) levels.insert(level);
    }
  }
  out << "| Ex. type |";
  for (const auto& [mode, x] : t.cells) {
    for (auto l : levels) out << " " << mode << " " << to_string(l) << " |";
    out << " " << mode << " Avg |";
  }
  out << "\n|---|";
  for (std::size_t i = 0; i < t.cells.size() * (levels.size() + 1); ++i) out << "---|";
  out << "\n";
  auto cell = [](const auto& m, const auto& key) {
    auto it = m.find(key);
    return it == m.end() ? std::string("-") : fmt(it->second);
  };
  for (const auto& pos : pos_names) {
    out << "| " << pos << " |";
    for (const auto& [mode, by_pos] : t.cells) {
      auto p = by_pos.find(pos);
      for (auto l : levels) out << " " << (p == by_pos.end() ? "-" : cell(p->second, l)) << " |";
      out << " " << cell(t.pos_average.at(mode), pos) << " |";
    }
    out << "\n";
  }
  out << "| Avg |";
  for (const auto& [mode, x] : t.cells) {
    for (auto l : levels) out << " " << cell(t.level_average.at(mode), l) << " |";
    out << " " << fmt(t.mode_average.at(mode)) << " |";
  }
  out << "\n\nOverall: " << (t.overall ? fmt(*t.overall) : "-") << " (all items, any student level: "
      << fmt(t.all_items_average) << ")\n";
  return out.str();
}

}  // namespace hitex
