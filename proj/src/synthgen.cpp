#include "pairlens/synthgen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <string_view>

#include "pairlens/error.hpp"

namespace pairlens {

namespace {

constexpr std::string_view kNeutral[] = {
    "video",    "new",      "track",    "live",     "session",  "from",     "the",      "studio",   "tour",
    "cover",    "version",  "remix",    "edit",     "full",     "album",    "part",     "episode",  "review",
    "guide",    "trailer",  "highlights", "match",  "game",     "recipe",   "build",    "setup",    "update",
    "clip",     "scene",    "moment",   "city",     "night",    "morning",  "river",    "mountain", "road",
    "train",    "kitchen",  "garden",   "house",    "engine",   "camera",   "drone",    "piano",    "guitar",
    "drum",     "bass",     "song",     "band",     "singer",   "team",     "player",   "coach",    "season",
    "round",    "final",    "week",     "day",      "year",     "first",    "second",   "third",    "test",
    "run",      "trip",     "walk",     "ride",     "flight",   "boat",     "car",      "bike",     "truck",
    "street",   "market",   "shop",     "school",   "office",   "farm",     "forest",   "lake",     "beach",
    "island",   "bridge",   "tower",    "castle",   "museum",   "theater",  "stage",    "concert",  "parade",
    "show",     "channel",  "stream",   "podcast",  "interview", "talk",    "lecture",  "lesson",   "tutorial",
    "make",     "with",     "and",      "in",       "on",       "at",       "of",       "for",      "about",
    "after",    "before",   "during",   "over",     "under",    "near",     "inside",   "outside",  "weekend",
    "summer",   "winter",   "spring",   "autumn",   "ocean",    "desert",   "valley",   "village",  "harbor",
    "station",  "airport",  "factory",  "workshop", "garage",   "basement", "rooftop",  "window",   "door",
    "table",    "chair",    "lamp",     "clock",    "radio",    "record",   "vinyl",    "tape",     "speaker",
    "mix",      "beat",     "loop",     "sample",   "chord",    "melody",   "rhythm",   "tempo",    "verse",
    "chorus",   "intro",    "outro",    "sunset",   "sunrise",  "rain",     "snow",     "storm",    "wind",
    "cloud",    "sky",      "star",     "moon",     "planet",   "rocket",   "satellite", "robot",   "machine",
    "circuit",  "motor",    "battery",  "sensor",   "code",     "script",   "server",   "network",  "planner"};

constexpr std::string_view kPositive[] = {"amazing",  "great",     "love",    "beautiful", "awesome",
                                                        "best",     "happy",     "wonderful", "brilliant", "perfect"};
constexpr std::string_view kNegative[] = {"terrible", "awful", "hate",     "worst", "sad",
                                                        "horrible", "disaster", "ugly", "broken", "angry"};
constexpr std::string_view kCategories[] = {"Music",  "Gaming", "Sports",  "Education", "Comedy",
                                                          "Entertainment", "News", "Howto", "Travel", "Science"};

constexpr int kMinWords = 3;
constexpr int kMaxWords = 14;
constexpr double kUppercaseProb = 0.10;
constexpr double kNumberProb = 0.15;
constexpr double kExclamationProb = 0.08;
constexpr double kQuestionProb = 0.08;
// Sentiment level -2..2
constexpr std::array<double, 5> kSentimentProbs = {0.10, 0.20, 0.40, 0.20, 0.10};

std::uint64_t uniform_int(Rng& rng, std::uint64_t n) {
  // Lemire's multiply-shift; unbiased enough for generator use.
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(rng()) * n) >> 64);
}

bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

int poisson(Rng& rng, double mean) {
  const double limit = std::exp(-mean);
  int k = 0;
  double prod = uniform01(rng);
  while (prod > limit) {
    ++k;
    prod *= uniform01(rng);
  }
  return k;
}

struct TitleDraft {
  std::vector<std::string> tokens;
  std::vector<char> kinds;  // n neutral, s sentiment, u uppercase, d number
  std::string suffix;
  int sentiment = 0;
  bool uppercase = false;
  bool number = false;

  int words() const { return static_cast<int>(tokens.size()); }

  std::array<double, 4> features() const {
    return {static_cast<double>(words()), static_cast<double>(sentiment), uppercase ? 1.0 : 0.0, number ? 1.0 : 0.0};
  }

  std::string render() const {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i) out += ' ';
      std::string t = tokens[i];
      if (i == 0 && kinds[i] != 'u' && !t.empty() && t[0] >= 'a' && t[0] <= 'z') t[0] = static_cast<char>(t[0] - 32);
      out += t;
    }
    return out + suffix;
  }
};

std::string pick_neutral(Rng& rng) { return std::string(kNeutral[uniform_int(rng, std::size(kNeutral))]); }

TitleDraft draft_title(Rng& rng) {
  TitleDraft d;
  const int n = kMinWords + static_cast<int>(uniform_int(rng, kMaxWords - kMinWords + 1));
  double u = uniform01(rng);
  int level = -2;
  for (double p : kSentimentProbs) {
    if (u < p) break;
    u -= p;
    ++level;
  }
  level = std::clamp(level, -2, 2);
  d.sentiment = level;
  for (int i = 0; i < n; ++i) {
    d.tokens.push_back(pick_neutral(rng));
    d.kinds.push_back('n');
  }
  // Sentiment tokens overwrite distinct positions.
  const int hits = std::min(std::abs(level), n - 1);
  for (int h = 0; h < hits; ++h) {
    std::size_t pos = uniform_int(rng, static_cast<std::uint64_t>(n));
    while (d.kinds[pos] != 'n') pos = (pos + 1) % static_cast<std::size_t>(n);
    const auto* words = level > 0 ? kPositive : kNegative;
    d.tokens[pos] = std::string(words[uniform_int(rng, std::size(kPositive))]);
    d.kinds[pos] = 's';
  }
  const auto neutral_slot = [&](Rng& r) -> std::optional<std::size_t> {
    std::vector<std::size_t> slots;
    for (std::size_t i = 0; i < d.kinds.size(); ++i)
      if (d.kinds[i] == 'n' && d.tokens[i].size() >= 3) slots.push_back(i);
    if (slots.empty()) return std::nullopt;
    return slots[uniform_int(r, slots.size())];
  };
  if (bernoulli(rng, kNumberProb)) {
    if (const auto pos = neutral_slot(rng)) {
      d.tokens[*pos] = std::to_string(1 + uniform_int(rng, 2024));
      d.kinds[*pos] = 'd';
      d.number = true;
    }
  }
  if (bernoulli(rng, kUppercaseProb)) {
    if (const auto pos = neutral_slot(rng)) {
      for (auto& c : d.tokens[*pos]) c = static_cast<char>(c - 32);
      d.kinds[*pos] = 'u';
      d.uppercase = true;
    }
  }
  const double p = uniform01(rng);
  if (p < kExclamationProb) {
    d.suffix = "!";
  } else if (p < kExclamationProb + kQuestionProb) {
    d.suffix = "?";
  }
  return d;
}

// Near-duplicate of an existing title: one or two neutral words swapped.
TitleDraft perturb_title(const TitleDraft& src, Rng& rng) {
  TitleDraft d = src;
  std::vector<std::size_t> slots;
  for (std::size_t i = 0; i < d.kinds.size(); ++i)
    if (d.kinds[i] == 'n') slots.push_back(i);
  if (slots.empty()) {
    d.suffix = d.suffix.empty() ? "!" : "";
    return d;
  }
  const int swaps = bernoulli(rng, 0.5) ? 1 : 2;
  for (int s = 0; s < swaps; ++s) {
    const auto pos = slots[uniform_int(rng, slots.size())];
    std::string w = pick_neutral(rng);
    while (w == d.tokens[pos]) w = pick_neutral(rng);
    d.tokens[pos] = w;
  }
  return d;
}

std::string make_video_id(Rng& rng) {
  static constexpr std::string_view kAlphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-_";
  std::string id(11, 'A');
  for (auto& c : id) c = kAlphabet[uniform_int(rng, kAlphabet.size())];
  return id;
}

std::string video_url(const std::string& id, Rng& rng) {
  const double u = uniform01(rng);
  if (u < 0.7) return "https://www.youtube.com/watch?v=" + id;
  if (u < 0.9) return "https://youtu.be/" + id;
  return "http://m.youtube.com/watch?v=" + id + "&t=30";
}

struct DraftPost {
  std::string subreddit;
  std::string title;
  std::int64_t created = 0;
  std::int64_t score = 0;
  std::string url;
  bool text = false;
  std::size_t order = 0;  // generation order, tie-break for equal timestamps
};

void fail(const std::string& m) { throw Error(ErrorKind::config, "BAD_CONFIG", m); }

}  // namespace

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double standard_normal(Rng& rng) {
  double u1 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double sample_powerlaw(Rng& rng, double alpha, double x_min) {
  const double u = 1.0 - uniform01(rng);  // (0, 1]
  return x_min * std::pow(u, -1.0 / (alpha - 1.0));
}

void SynthConfig::validate() const {
  if (n_subreddits < 1 || posts_per_subreddit < 1) fail("n_subreddits and posts_per_subreddit must be positive");
  if (n_videos < 0) fail("n_videos must be non-negative");
  if (n_categories < 1 || n_categories > static_cast<int>(std::size(kCategories)))
    fail("n_categories must be within [1,10]");
  if (!(views_alpha > 1.0) || !(subreddit_size_alpha > 1.0)) fail("power-law exponents must exceed 1");
  if (!(views_min > 0.0) || !(subreddit_size_min > 0.0) || !(views_cap > views_min)) fail("bad power-law bounds");
  for (double f : {same_video_prob, repost_prob, copy_title_fraction, text_post_fraction})
    if (!(f >= 0.0 && f <= 1.0)) fail("fractions must be within [0,1]");
  if (end_time - start_time <= burst_span || burst_span <= 0) fail("time range must exceed burst_span");
  if (!(burst_mean_size >= 1.0)) fail("burst_mean_size must be >= 1");
  if (neighbor_spread < 0) fail("neighbor_spread must be non-negative");
  if (!(exposure_halflife > 0.0) || noise_sd < 0.0 || subreddit_offset_sd < 0.0) fail("bad score model scales");
  static const std::array<std::string, 5> known = {"words", "sentiment", "uppercase", "numbers", "rewrite"};
  for (const auto& [k, v] : title_effect_weights) {
    if (std::find(known.begin(), known.end(), k) == known.end()) fail("unknown title effect '" + k + "'");
    if (!std::isfinite(v)) fail("title effect weights must be finite");
  }
}

nlohmann::json SynthConfig::to_json() const {
  return nlohmann::json{{"seed", seed},
                        {"n_subreddits", n_subreddits},
                        {"posts_per_subreddit", posts_per_subreddit},
                        {"n_videos", n_videos},
                        {"n_categories", n_categories},
                        {"views_alpha", views_alpha},
                        {"views_min", views_min},
                        {"views_cap", views_cap},
                        {"subreddit_size_alpha", subreddit_size_alpha},
                        {"subreddit_size_min", subreddit_size_min},
                        {"start_time", start_time},
                        {"end_time", end_time},
                        {"burst_mean_size", burst_mean_size},
                        {"burst_span", burst_span},
                        {"neighbor_spread", neighbor_spread},
                        {"same_video_prob", same_video_prob},
                        {"repost_prob", repost_prob},
                        {"copy_title_fraction", copy_title_fraction},
                        {"text_post_fraction", text_post_fraction},
                        {"base_log_score", base_log_score},
                        {"views_weight", views_weight},
                        {"exposure_weight", exposure_weight},
                        {"exposure_halflife", exposure_halflife},
                        {"subreddit_offset_sd", subreddit_offset_sd},
                        {"noise_sd", noise_sd},
                        {"title_effect_weights", title_effect_weights}};
}

SynthConfig SynthConfig::from_json(const nlohmann::json& j) {
  SynthConfig c;
  try {
    c.seed = j.value("seed", c.seed);
    c.n_subreddits = j.value("n_subreddits", c.n_subreddits);
    c.posts_per_subreddit = j.value("posts_per_subreddit", c.posts_per_subreddit);
    c.n_videos = j.value("n_videos", c.n_videos);
    c.n_categories = j.value("n_categories", c.n_categories);
    c.views_alpha = j.value("views_alpha", c.views_alpha);
    c.views_min = j.value("views_min", c.views_min);
    c.views_cap = j.value("views_cap", c.views_cap);
    c.subreddit_size_alpha = j.value("subreddit_size_alpha", c.subreddit_size_alpha);
    c.subreddit_size_min = j.value("subreddit_size_min", c.subreddit_size_min);
    c.start_time = j.value("start_time", c.start_time);
    c.end_time = j.value("end_time", c.end_time);
    c.burst_mean_size = j.value("burst_mean_size", c.burst_mean_size);
    c.burst_span = j.value("burst_span", c.burst_span);
    c.neighbor_spread = j.value("neighbor_spread", c.neighbor_spread);
    c.same_video_prob = j.value("same_video_prob", c.same_video_prob);
    c.repost_prob = j.value("repost_prob", c.repost_prob);
    c.copy_title_fraction = j.value("copy_title_fraction", c.copy_title_fraction);
    c.text_post_fraction = j.value("text_post_fraction", c.text_post_fraction);
    c.base_log_score = j.value("base_log_score", c.base_log_score);
    c.views_weight = j.value("views_weight", c.views_weight);
    c.exposure_weight = j.value("exposure_weight", c.exposure_weight);
    c.exposure_halflife = j.value("exposure_halflife", c.exposure_halflife);
    c.subreddit_offset_sd = j.value("subreddit_offset_sd", c.subreddit_offset_sd);
    c.noise_sd = j.value("noise_sd", c.noise_sd);
    if (j.contains("title_effect_weights"))
      c.title_effect_weights = j.at("title_effect_weights").get<std::map<std::string, double>>();
  } catch (const nlohmann::json::exception& e) {
    fail(std::string("synth config: ") + e.what());
  }
  return c;
}

SynthWorld generate_world(const SynthConfig& cfg) {
  cfg.validate();
  const auto weight = [&](const char* k) {
    const auto it = cfg.title_effect_weights.find(k);
    return it == cfg.title_effect_weights.end() ? 0.0 : it->second;
  };
  const double w_words = weight("words");
  const double w_sent = weight("sentiment");
  const double w_upper = weight("uppercase");
  const double w_num = weight("numbers");
  const double w_rewrite = weight("rewrite");
  const double words_mean = 0.5 * (kMinWords + kMaxWords);
  // Feature moments over rewritten titles, for the standardized planted effects.
  const std::array<const char*, 4> feature_keys = {"words", "sentiment", "uppercase", "numbers"};
  std::array<double, 4> feature_sum{}, feature_sq{};
  std::int64_t n_rewritten = 0;

  Rng video_rng(derive_seed(cfg.seed, "synth/videos"));
  Rng sub_rng(derive_seed(cfg.seed, "synth/subreddits"));
  Rng post_rng(derive_seed(cfg.seed, "synth/posts"));

  SynthWorld world;
  const int total_posts = cfg.n_subreddits * cfg.posts_per_subreddit;
  const int n_videos = cfg.n_videos > 0 ? cfg.n_videos : total_posts;

  // Videos, plus per-category lists ordered by views so that neighbours have
  // similar popularity.
  std::vector<std::vector<std::size_t>> by_category(static_cast<std::size_t>(cfg.n_categories));
  world.videos.reserve(static_cast<std::size_t>(n_videos));
  for (int i = 0; i < n_videos; ++i) {
    VideoRecord v;
    v.video_id = make_video_id(video_rng);
    v.views = static_cast<std::int64_t>(std::min(sample_powerlaw(video_rng, cfg.views_alpha, cfg.views_min), cfg.views_cap));
    const auto cat = uniform_int(video_rng, static_cast<std::uint64_t>(cfg.n_categories));
    v.category = std::string(kCategories[cat]);
    v.title = draft_title(video_rng).render();
    v.tags = {pick_neutral(video_rng), pick_neutral(video_rng)};
    by_category[cat].push_back(world.videos.size());
    world.videos.push_back(std::move(v));
  }
  for (auto& list : by_category) {
    std::sort(list.begin(), list.end(), [&](std::size_t a, std::size_t b) {
      return std::tie(world.videos[a].views, world.videos[a].video_id) <
             std::tie(world.videos[b].views, world.videos[b].video_id);
    });
  }

  struct SubredditInfo {
    std::string name;
    std::int64_t n_users;
    double offset;
  };
  std::vector<SubredditInfo> subs;
  for (int s = 0; s < cfg.n_subreddits; ++s) {
    char name[16];
    std::snprintf(name, sizeof name, "sub%03d", s);
    const double users = std::min(sample_powerlaw(sub_rng, cfg.subreddit_size_alpha, cfg.subreddit_size_min), 1e15);
    subs.push_back({name, static_cast<std::int64_t>(users), cfg.subreddit_offset_sd * standard_normal(sub_rng)});
  }

  std::int64_t n_copy = 0;
  std::int64_t n_repost = 0;
  std::int64_t n_text = 0;
  std::vector<DraftPost> drafts;
  drafts.reserve(static_cast<std::size_t>(total_posts));
  for (const auto& sub : subs) {
    int made = 0;
    while (made < cfg.posts_per_subreddit) {
      const int k = std::min(1 + poisson(post_rng, cfg.burst_mean_size - 1.0), cfg.posts_per_subreddit - made);
      const auto range = static_cast<std::uint64_t>(cfg.end_time - cfg.start_time - cfg.burst_span);
      const std::int64_t t0 = cfg.start_time + static_cast<std::int64_t>(uniform_int(post_rng, range));
      std::vector<std::int64_t> times;
      for (int j = 0; j < k; ++j)
        times.push_back(t0 + static_cast<std::int64_t>(uniform_int(post_rng, static_cast<std::uint64_t>(cfg.burst_span))));
      std::sort(times.begin(), times.end());

      const auto cat = uniform_int(post_rng, static_cast<std::uint64_t>(cfg.n_categories));
      const auto& pool = by_category[cat];
      const auto anchor = static_cast<std::int64_t>(uniform_int(post_rng, std::max<std::size_t>(pool.size(), 1)));
      std::vector<std::size_t> burst_videos;
      std::vector<TitleDraft> burst_titles;  // rewritten titles available for reposts

      for (int j = 0; j < k; ++j) {
        DraftPost p;
        p.subreddit = sub.name;
        p.created = times[static_cast<std::size_t>(j)];
        p.order = drafts.size();
        const double exposure = cfg.exposure_weight * std::exp(-static_cast<double>(p.created - t0) / cfg.exposure_halflife);
        double log_score = cfg.base_log_score + exposure + sub.offset + cfg.noise_sd * standard_normal(post_rng);

        if (pool.empty() || bernoulli(post_rng, cfg.text_post_fraction)) {
          const auto d = draft_title(post_rng);
          p.title = d.render();
          p.text = true;
          p.url = "https://www.reddit.com/r/" + sub.name + "/comments/" + std::to_string(drafts.size());
          log_score += cfg.views_weight * std::log(cfg.views_min);
          ++n_text;
        } else {
          std::size_t video;
          if (!burst_videos.empty() && bernoulli(post_rng, cfg.same_video_prob)) {
            video = burst_videos[uniform_int(post_rng, burst_videos.size())];
          } else {
            const auto width = static_cast<std::uint64_t>(2 * cfg.neighbor_spread + 1);
            const auto delta = static_cast<std::int64_t>(uniform_int(post_rng, width)) - cfg.neighbor_spread;
            const auto pos = std::clamp<std::int64_t>(anchor + delta, 0, static_cast<std::int64_t>(pool.size()) - 1);
            video = pool[static_cast<std::size_t>(pos)];
            if (std::find(burst_videos.begin(), burst_videos.end(), video) == burst_videos.end())
              burst_videos.push_back(video);
          }
          const auto& v = world.videos[video];
          p.url = video_url(v.video_id, post_rng);
          log_score += cfg.views_weight * std::log(static_cast<double>(v.views));

          if (bernoulli(post_rng, cfg.copy_title_fraction)) {
            p.title = v.title;
            ++n_copy;
          } else {
            TitleDraft d;
            if (!burst_titles.empty() && bernoulli(post_rng, cfg.repost_prob)) {
              d = perturb_title(burst_titles[uniform_int(post_rng, burst_titles.size())], post_rng);
              ++n_repost;
            } else {
              d = draft_title(post_rng);
            }
            p.title = d.render();
            const auto f = d.features();
            for (std::size_t k = 0; k < f.size(); ++k) {
              feature_sum[k] += f[k];
              feature_sq[k] += f[k] * f[k];
            }
            ++n_rewritten;
            log_score += w_rewrite + w_words * (d.words() - words_mean) + w_sent * d.sentiment +
                         w_upper * ((d.uppercase ? 1.0 : 0.0) - kUppercaseProb) +
                         w_num * ((d.number ? 1.0 : 0.0) - kNumberProb);
            burst_titles.push_back(std::move(d));
          }
        }
        const double raw = std::exp(std::min(log_score, 40.0)) - 1.0;
        p.score = std::max<std::int64_t>(0, std::llround(raw));
        drafts.push_back(std::move(p));
      }
      made += k;
    }
  }

  std::sort(drafts.begin(), drafts.end(), [](const DraftPost& a, const DraftPost& b) {
    return std::tie(a.created, a.order) < std::tie(b.created, b.order);
  });
  world.posts.reserve(drafts.size());
  for (std::size_t i = 0; i < drafts.size(); ++i) {
    const auto& d = drafts[i];
    char id[32];
    std::snprintf(id, sizeof id, "p%07zu", i);
    world.posts.push_back(nlohmann::json{{"id", id},
                                         {"subreddit", d.subreddit},
                                         {"title", d.title},
                                         {"created_utc", d.created},
                                         {"score", d.score},
                                         {"url", d.url},
                                         {"post_type", d.text ? "text" : "video"}});
  }

  auto sub_json = nlohmann::json::array();
  for (const auto& s : subs) sub_json.push_back({{"subreddit", s.name}, {"n_users", s.n_users}, {"offset", s.offset}});
  // weight * sd(feature) / noise_sd: the planted shift in log score per
  // standard deviation of the feature, in units of the score noise.
  auto planted = nlohmann::json::object();
  for (std::size_t k = 0; k < feature_keys.size(); ++k) {
    const double w = weight(feature_keys[k]);
    if (w == 0.0 || n_rewritten < 2) continue;
    const double n = static_cast<double>(n_rewritten);
    const double mean = feature_sum[k] / n;
    const double sd = std::sqrt(std::max(0.0, (feature_sq[k] - n * mean * mean) / (n - 1)));
    planted[feature_keys[k]] = {{"weight", w}, {"feature_sd", sd}, {"standardized", std::fabs(w) * sd / cfg.noise_sd}};
  }
  world.ground_truth = nlohmann::json{
      {"planted_effects", planted},
      {"config", cfg.to_json()},
      {"subreddits", sub_json},
      {"title_feature_centers",
       {{"words", words_mean}, {"sentiment", 0.0}, {"uppercase", kUppercaseProb}, {"numbers", kNumberProb}}},
      {"counts",
       {{"posts", drafts.size()},
        {"videos", world.videos.size()},
        {"video_posts", static_cast<std::int64_t>(drafts.size()) - n_text},
        {"text_posts", n_text},
        {"copy_title_posts", n_copy},
        {"repost_titles", n_repost}}}};
  return world;
}

void write_world(const SynthWorld& world, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io, "IO_ERROR", "cannot create " + dir.string() + ": " + ec.message());
  const auto open = [](const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error(ErrorKind::io, "IO_ERROR", "cannot write " + p.string());
    return out;
  };
  {
    auto out = open(dir / "posts.jsonl");
    for (const auto& p : world.posts) out << p.dump() << '\n';
  }
  {
    auto out = open(dir / "videos.jsonl");
    for (const auto& v : world.videos) out << video_to_json(v).dump() << '\n';
  }
  {
    auto out = open(dir / "ground_truth.json");
    out << world.ground_truth.dump(2) << '\n';
  }
}

}  // namespace pairlens
