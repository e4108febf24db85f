#include "pairlens/pairing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string_view>

#include "pairlens/error.hpp"
#include "pairlens/rng.hpp"
#include "pairlens/stats.hpp"
#include "pairlens/textmetrics.hpp"
#include "pairlens/utf8.hpp"

namespace pairlens {

namespace {

std::int64_t abs_diff(std::int64_t a, std::int64_t b) { return a > b ? a - b : b - a; }

// Posts grouped by subreddit (lexical order), each group sorted by time then id.
std::map<std::string, std::vector<std::size_t>> subreddit_groups(const PostIndex& index) {
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < index.size(); ++i) groups[index[i].post.subreddit].push_back(i);
  for (auto& [name, g] : groups) {
    std::sort(g.begin(), g.end(), [&](std::size_t a, std::size_t b) {
      const auto& pa = index[a].post;
      const auto& pb = index[b].post;
      return std::tie(pa.created_at, pa.post_id) < std::tie(pb.created_at, pb.post_id);
    });
  }
  return groups;
}

// Greedy earliest-first matching: each post (in time order) pairs with the
// earliest still-unmatched later post inside the window that `eligible`
// accepts. In exhaustive mode every eligible pair is emitted.
template <class Eligible, class Make>
std::vector<PostPair> match_within_window(const PostIndex& index, const PairingConfig& cfg, Eligible&& eligible,
                                          Make&& make) {
  std::vector<PostPair> out;
  for (const auto& [name, group] : subreddit_groups(index)) {
    std::vector<bool> matched(group.size(), false);
    for (std::size_t a = 0; a < group.size(); ++a) {
      if (matched[a] && !cfg.exhaustive) continue;
      const auto& pa = index[group[a]].post;
      for (std::size_t b = a + 1; b < group.size(); ++b) {
        const auto& pb = index[group[b]].post;
        if (pb.created_at - pa.created_at > cfg.time_window) break;
        if (!cfg.exhaustive && matched[b]) continue;
        if (!eligible(group[a], group[b])) continue;
        out.push_back(make(group[a], group[b]));
        if (!cfg.exhaustive) {
          matched[a] = matched[b] = true;
          break;
        }
      }
    }
  }
  return out;
}

bool positive_views(const PostIndex& index, std::size_t a, std::size_t b) {
  return index[a].video_views > 0 && index[b].video_views > 0;
}

double views_ratio(const PostIndex& index, std::size_t a, std::size_t b) {
  return static_cast<double>(index[a].video_views) / static_cast<double>(index[b].video_views);
}

double undirected_vvr(const PostIndex& index, std::size_t a, std::size_t b) {
  const auto va = index[a].video_views;
  const auto vb = index[b].video_views;
  return static_cast<double>(std::max(va, vb)) / static_cast<double>(std::min(va, vb));
}

PostPair make_pair_record(const PostIndex& index, std::size_t post1, std::size_t post2, Phase phase,
                          Ordering ordering) {
  PostPair p;
  p.first = post1;
  p.second = post2;
  p.phase = phase;
  p.ordering = ordering;
  p.delta_t = abs_diff(index[post1].post.created_at, index[post2].post.created_at);
  p.vvr = index[post1].video_id() == index[post2].video_id() ? 1.0 : views_ratio(index, post1, post2);
  p.ld_pair = normalized_ld(index[post1].post.title, index[post2].post.title);
  p.ld1_video = index.ld_video(post1);
  p.ld2_video = index.ld_video(post2);
  return p;
}

// Seeded, order-free coin for the random post1/post2 assignment.
bool swap_for_random_order(const PostIndex& index, std::size_t a, std::size_t b, std::uint64_t seed) {
  std::string_view ia = index[a].id();
  std::string_view ib = index[b].id();
  if (ib < ia) std::swap(ia, ib);
  const auto h = splitmix64(seed ^ fnv1a(ib, fnv1a(ia) ^ 0x5bd1e995ull));
  return ((h >> 17) & 1u) == 1u;
}

PostPair make_random_ordered(const PostIndex& index, std::size_t a, std::size_t b, Phase phase,
                             std::uint64_t seed) {
  // Canonical (id-sorted) orientation first so the outcome does not depend on
  // which builder discovered the pair.
  if (index[b].id() < index[a].id()) std::swap(a, b);
  if (swap_for_random_order(index, a, b, seed)) std::swap(a, b);
  return make_pair_record(index, a, b, phase, Ordering::random);
}

std::size_t count_code_points_trimmed(std::string_view s) {
  const auto text = utf8::decode(s);
  std::size_t b = 0;
  std::size_t e = text.size();
  while (b < e && utf8::is_space(text[b])) ++b;
  while (e > b && utf8::is_space(text[e - 1])) --e;
  return e - b;
}

std::pair<std::string, std::string> unordered_ids(const PostIndex& index, const PostPair& p) {
  auto a = index[p.first].id();
  auto b = index[p.second].id();
  if (b < a) std::swap(a, b);
  return {a, b};
}

}  // namespace

std::string to_string(Phase p) {
  switch (p) {
    case Phase::exact: return "exact";
    case Phase::similar: return "similar";
    case Phase::inverse: return "inverse";
  }
  return "";
}

std::string to_string(Ordering o) { return o == Ordering::random ? "random" : "by_score"; }

Phase phase_from_string(const std::string& s) {
  if (s == "exact") return Phase::exact;
  if (s == "similar") return Phase::similar;
  if (s == "inverse") return Phase::inverse;
  throw Error(ErrorKind::validation, "BAD_PHASE", "unknown phase '" + s + "'");
}

PostIndex::PostIndex(std::vector<JoinedPost> posts) : posts_(std::move(posts)) {
  ld_video_.reserve(posts_.size());
  for (std::size_t i = 0; i < posts_.size(); ++i) {
    if (!posts_[i].post.video_id)
      throw Error(ErrorKind::validation, "UNJOINED_POST", "post " + posts_[i].id() + " has no video id");
    ld_video_.push_back(normalized_ld(posts_[i].post.title, posts_[i].video_title));
    if (!by_id_.emplace(posts_[i].id(), i).second)
      throw Error(ErrorKind::validation, "DUPLICATE_ID", "duplicate post id " + posts_[i].id());
  }
}

std::optional<std::size_t> PostIndex::find(const std::string& post_id) const {
  const auto it = by_id_.find(post_id);
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

void PairingConfig::validate() const {
  const auto fail = [](const std::string& m) { throw Error(ErrorKind::config, "BAD_CONFIG", m); };
  if (time_window <= 0) fail("time_window must be positive");
  if (!(vvr_max >= 1.0)) fail("vvr_max must be >= 1");
  if (ld_pair_max < 0 || ld_pair_max > 100) fail("ld_pair_max must be within [0,100]");
  if (ld_video_max < 0 || ld_video_max > 100) fail("ld_video_max must be within [0,100]");
  if (min_title_chars < 0) fail("min_title_chars must be non-negative");
  if (score_ratio_min < 1.0) fail("score_ratio_min must be >= 1");
  if (score_diff_min < 0) fail("score_diff_min must be non-negative");
}

// ---------------------------------------------------------------------------

std::vector<PostPair> build_exact_pairs(const PostIndex& index, const PairingConfig& cfg) {
  cfg.validate();
  return match_within_window(
      index, cfg, [&](std::size_t a, std::size_t b) { return index[a].video_id() == index[b].video_id(); },
      [&](std::size_t a, std::size_t b) { return make_random_ordered(index, a, b, Phase::exact, cfg.rng_seed); });
}

std::vector<PostPair> build_similar_pairs(const PostIndex& index, const PairingConfig& cfg, VideoRelation relation) {
  cfg.validate();
  const auto eligible = [&](std::size_t a, std::size_t b) {
    const bool same_video = index[a].video_id() == index[b].video_id();
    if (relation == VideoRelation::same) return same_video;
    if (same_video) return false;
    if (index[a].video_category != index[b].video_category) return false;
    if (!positive_views(index, a, b)) return false;
    return undirected_vvr(index, a, b) <= cfg.vvr_max;
  };
  const auto phase = relation == VideoRelation::same ? Phase::exact : Phase::similar;
  return match_within_window(index, cfg, eligible, [&](std::size_t a, std::size_t b) {
    return make_random_ordered(index, a, b, phase, cfg.rng_seed);
  });
}

std::vector<PostPair> build_inverse_pairs(const PostIndex& index, const PairingConfig& cfg) {
  cfg.validate();
  const auto eligible = [&](std::size_t a, std::size_t b) {
    const auto sa = index[a].post.score;
    const auto sb = index[b].post.score;
    if (sa == sb || !positive_views(index, a, b)) return false;
    const auto winner = sa > sb ? a : b;
    const auto loser = sa > sb ? b : a;
    return index[winner].video_views <= index[loser].video_views;
  };
  return match_within_window(index, cfg, eligible, [&](std::size_t a, std::size_t b) {
    const bool a_wins = index[a].post.score > index[b].post.score;
    return make_pair_record(index, a_wins ? a : b, a_wins ? b : a, Phase::inverse, Ordering::by_score);
  });
}

bool satisfies_phase(const PostIndex& index, const PostPair& p, const PairingConfig& cfg) {
  if (p.first >= index.size() || p.second >= index.size()) return false;
  const auto& a = index[p.first];
  const auto& b = index[p.second];
  if (a.post.subreddit != b.post.subreddit || a.id() == b.id()) return false;
  const auto dt = abs_diff(a.post.created_at, b.post.created_at);
  if (dt != p.delta_t || dt > cfg.time_window) return false;
  if (!(p.vvr > 0)) return false;
  if (p.ordering == Ordering::by_score && !(a.post.score > b.post.score)) return false;
  const bool same_video = a.video_id() == b.video_id();
  switch (p.phase) {
    case Phase::exact:
      return same_video && p.vvr == 1.0;
    case Phase::similar:
      return !same_video && a.video_category == b.video_category && positive_views(index, p.first, p.second) &&
             undirected_vvr(index, p.first, p.second) <= cfg.vvr_max && p.vvr == views_ratio(index, p.first, p.second);
    case Phase::inverse:
      if (!positive_views(index, p.first, p.second) || a.post.score <= b.post.score) return false;
      return a.video_views <= b.video_views && p.vvr <= 1.0 &&
             p.vvr == (same_video ? 1.0 : views_ratio(index, p.first, p.second));
  }
  return false;
}

std::vector<PostPair> apply_title_filters(const PostIndex& index, const std::vector<PostPair>& pairs,
                                          const PairingConfig& cfg) {
  cfg.validate();
  const auto title_ok = [&](std::size_t i) {
    const auto& t = index[i].post.title;
    if (count_code_points_trimmed(t) < static_cast<std::size_t>(cfg.min_title_chars)) return false;
    return !cfg.require_multiword || split_words(utf8::decode(t)).size() >= 2;
  };
  std::vector<PostPair> out;
  for (const auto& p : pairs) {
    if (p.ld_pair > cfg.ld_pair_max) continue;
    if (p.ld1_video > cfg.ld_video_max || p.ld2_video > cfg.ld_video_max) continue;
    if (!title_ok(p.first) || !title_ok(p.second)) continue;
    const auto hi = std::max(index[p.first].post.score, index[p.second].post.score);
    const auto lo = std::min(index[p.first].post.score, index[p.second].post.score);
    if (static_cast<double>(hi) < cfg.score_ratio_min * static_cast<double>(lo)) continue;
    if (hi - lo < cfg.score_diff_min) continue;
    out.push_back(p);
  }
  return out;
}

std::vector<PostPair> order_by_score(const PostIndex& index, const std::vector<PostPair>& pairs) {
  std::vector<PostPair> out;
  out.reserve(pairs.size());
  for (auto p : pairs) {
    const auto s1 = index[p.first].post.score;
    const auto s2 = index[p.second].post.score;
    if (s1 == s2) continue;
    if (s1 < s2) {
      std::swap(p.first, p.second);
      std::swap(p.ld1_video, p.ld2_video);
      p.vvr = 1.0 / p.vvr;
    }
    p.ordering = Ordering::by_score;
    out.push_back(p);
  }
  return out;
}

std::vector<PostPair> mix_datasets(const PostIndex& index, const std::vector<PostPair>& exact,
                                   const std::vector<PostPair>& similar, const std::vector<PostPair>& inverse) {
  std::set<std::pair<std::string, std::string>> seen;
  std::vector<PostPair> merged;
  for (const auto* set : {&exact, &inverse, &similar}) {
    for (const auto& p : *set)
      if (seen.insert(unordered_ids(index, p)).second) merged.push_back(p);
  }
  std::vector<PostPair> out;
  out.reserve(merged.size());
  for (auto p : merged) {
    if (index[p.first].post.score != index[p.second].post.score) {
      p = order_by_score(index, {p}).front();
    }
    out.push_back(p);
  }
  std::stable_sort(out.begin(), out.end(), [&](const PostPair& x, const PostPair& y) {
    const auto& sx = index[x.first].post.subreddit;
    const auto& sy = index[y.first].post.subreddit;
    if (sx != sy) return sx < sy;
    const auto tx = std::min(index[x.first].post.created_at, index[x.second].post.created_at);
    const auto ty = std::min(index[y.first].post.created_at, index[y.second].post.created_at);
    if (tx != ty) return tx < ty;
    return unordered_ids(index, x) < unordered_ids(index, y);
  });
  return out;
}

std::vector<PostPair> build_mixed_pairs(const PostIndex& index, const PairingConfig& cfg) {
  const auto mixed = mix_datasets(index, build_exact_pairs(index, cfg), build_similar_pairs(index, cfg),
                                  build_inverse_pairs(index, cfg));
  return apply_title_filters(index, mixed, cfg);
}

std::vector<ScoredPair> scored_pairs(const PostIndex& index, const std::vector<PostPair>& pairs) {
  std::vector<ScoredPair> out;
  out.reserve(pairs.size());
  for (const auto& p : order_by_score(index, pairs)) {
    const auto& a = index[p.first];
    const auto& b = index[p.second];
    out.push_back(ScoredPair{pair_id(index, p), p.phase, a.id(), b.id(), a.video_id(), b.video_id(),
                             a.post.created_at, b.post.created_at, a.video_views, b.video_views, a.post.score,
                             b.post.score});
  }
  return out;
}

std::string pair_id(const PostIndex& index, const PostPair& pair) {
  const auto [a, b] = unordered_ids(index, pair);
  return a + "|" + b;
}

nlohmann::json pair_to_json(const PostIndex& index, const PostPair& p) {
  return nlohmann::json{{"pair_id", pair_id(index, p)},
                        {"phase", to_string(p.phase)},
                        {"post1_id", index[p.first].id()},
                        {"post2_id", index[p.second].id()},
                        {"delta_t", p.delta_t},
                        {"vvr", p.vvr},
                        {"ld_pair", p.ld_pair},
                        {"ld1_video", p.ld1_video},
                        {"ld2_video", p.ld2_video},
                        {"ordering", to_string(p.ordering)}};
}

std::vector<PostPair> parse_pairs(std::istream& in, const PostIndex& index) {
  std::vector<PostPair> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      const auto a = index.find(j.at("post1_id").get<std::string>());
      const auto b = index.find(j.at("post2_id").get<std::string>());
      if (!a || !b) throw std::invalid_argument("pair references an unknown post");
      PostPair p;
      p.first = *a;
      p.second = *b;
      p.phase = phase_from_string(j.at("phase").get<std::string>());
      p.delta_t = j.at("delta_t").get<std::int64_t>();
      p.vvr = j.at("vvr").get<double>();
      p.ld_pair = j.at("ld_pair").get<int>();
      p.ld1_video = j.at("ld1_video").get<int>();
      p.ld2_video = j.at("ld2_video").get<int>();
      p.ordering = j.at("ordering").get<std::string>() == "by_score" ? Ordering::by_score : Ordering::random;
      out.push_back(p);
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      throw Error(ErrorKind::validation, "BAD_PAIR_RECORD", "pairs line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<TimeWindowRow> time_window_analysis(const PostIndex& index, const std::vector<PostPair>& exact_pairs,
                                                const std::vector<std::int64_t>& cumulative_windows) {
  std::vector<TimeWindowRow> rows;
  for (const auto window : cumulative_windows) {
    TimeWindowRow row;
    row.window = window;
    for (const auto& p : exact_pairs) {
      if (p.delta_t > window || p.delta_t == 0) continue;
      const auto& a = index[p.first].post;
      const auto& b = index[p.second].post;
      const auto& earlier = a.created_at < b.created_at ? a : b;
      const auto& later = a.created_at < b.created_at ? b : a;
      if (later.score > earlier.score) {
        ++row.later_wins;
      } else if (later.score < earlier.score) {
        ++row.earlier_wins;
      }
    }
    if (row.later_wins + row.earlier_wins > 0)
      row.later_win_ratio =
          static_cast<double>(row.later_wins) / static_cast<double>(row.later_wins + row.earlier_wins);
    rows.push_back(row);
  }
  return rows;
}

VvrAnalysis vvr_interval_analysis(const PostIndex& index, const std::vector<PostPair>& pairs,
                                  const std::vector<double>& edges) {
  if (edges.size() < 2 || !std::is_sorted(edges.begin(), edges.end()))
    throw Error(ErrorKind::config, "BAD_CONFIG", "vvr interval edges must be sorted with at least two entries");
  VvrAnalysis out;
  std::vector<std::vector<double>> diffs(edges.size() - 1);
  std::vector<double> all_vvr;
  std::vector<double> all_diff;
  out.intervals.resize(edges.size() - 1);
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    out.intervals[k].lo = edges[k];
    out.intervals[k].hi = edges[k + 1];
  }
  for (const auto& p : pairs) {
    const double diff =
        static_cast<double>(index[p.first].post.score) - static_cast<double>(index[p.second].post.score);
    all_vvr.push_back(p.vvr);
    all_diff.push_back(diff);
    const auto it = std::upper_bound(edges.begin(), edges.end(), p.vvr);
    if (it == edges.begin()) continue;
    if (it == edges.end() && p.vvr != edges.back()) continue;
    // The last interval is closed so that vvr == edges.back() is counted.
    const auto k = std::min(static_cast<std::size_t>(it - edges.begin() - 1), edges.size() - 2);
    auto& row = out.intervals[k];
    ++row.n;
    diffs[k].push_back(diff);
    if (diff > 0) ++row.post1_wins;
    if (diff < 0) ++row.post2_wins;
  }
  for (std::size_t k = 0; k < out.intervals.size(); ++k) {
    auto& row = out.intervals[k];
    if (row.n == 0) continue;
    row.mean_score_diff = stats::mean(diffs[k]);
    if (row.post1_wins + row.post2_wins > 0)
      row.win_ratio = static_cast<double>(row.post1_wins) / static_cast<double>(row.post1_wins + row.post2_wins);
  }
  out.n = all_vvr.size();
  try {
    const double r = stats::spearman(all_vvr, all_diff);
    out.spearman = r;
    const double dof = static_cast<double>(all_vvr.size()) - 2.0;
    out.spearman_p = std::fabs(r) >= 1.0 ? 0.0 : stats::student_t_two_sided(r * std::sqrt(dof / (1.0 - r * r)), dof);
  } catch (const Error&) {
  }
  return out;
}

std::vector<LdBinRow> ld_bin_analysis(const PostIndex& index, BinMode mode) {
  std::vector<std::vector<double>> scores;
  std::vector<LdBinRow> rows;
  if (mode == BinMode::fixed) {
    scores.resize(20);
    rows.resize(20);
    for (int k = 0; k < 20; ++k) {
      rows[k].lo = 5 * k;
      rows[k].hi = k == 19 ? 100 : 5 * k + 4;
    }
    for (std::size_t i = 0; i < index.size(); ++i) {
      const int k = std::min(index.ld_video(i) / 5, 19);
      scores[static_cast<std::size_t>(k)].push_back(static_cast<double>(index[i].post.score));
    }
  } else {
    constexpr std::size_t kBins = 5;
    std::vector<std::size_t> order(index.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (index.ld_video(a) != index.ld_video(b)) return index.ld_video(a) < index.ld_video(b);
      return index[a].id() < index[b].id();
    });
    scores.resize(kBins);
    rows.resize(kBins);
    const std::size_t n = order.size();
    for (std::size_t k = 0; k < kBins; ++k) {
      const std::size_t begin = k * n / kBins;
      const std::size_t end = (k + 1) * n / kBins;
      if (begin < end) {
        rows[k].lo = index.ld_video(order[begin]);
        rows[k].hi = index.ld_video(order[end - 1]);
      }
      for (std::size_t r = begin; r < end; ++r) scores[k].push_back(static_cast<double>(index[order[r]].post.score));
    }
  }

  const auto& reference = scores.back();
  rows.back().reference = true;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    auto& row = rows[k];
    row.n = static_cast<std::int64_t>(scores[k].size());
    if (row.n > 0) row.mean_score = stats::mean(scores[k]);
    if (row.reference) continue;
    try {
      const auto w = stats::welch_t_test(scores[k], reference);
      row.p_vs_reference = w.p;
      row.log10_p = std::log10(std::max(w.p, 1e-300));
      row.direction = stats::to_string(w.direction);
    } catch (const Error&) {
    }
  }
  return rows;
}

}  // namespace pairlens
