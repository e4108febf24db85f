#include "pairlens/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <iostream>
#include <numeric>
#include <set>
#include <unordered_set>

#include "pairlens/error.hpp"

namespace pairlens {

namespace {

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// Value of `key` in a query string ("a=1&v=ID&t=3"), if present.
std::optional<std::string_view> query_param(std::string_view query, std::string_view key) {
  while (!query.empty()) {
    const auto amp = query.find('&');
    const auto part = query.substr(0, amp);
    const auto eq = part.find('=');
    if (eq != std::string_view::npos && part.substr(0, eq) == key) return part.substr(eq + 1);
    if (amp == std::string_view::npos) break;
    query.remove_prefix(amp + 1);
  }
  return std::nullopt;
}

std::int64_t require_int(const nlohmann::json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number_integer()) throw std::invalid_argument(std::string("non-integer ") + key);
  return v.get<std::int64_t>();
}

PostRecord post_from_json(const nlohmann::json& j) {
  PostRecord p;
  p.post_id = j.at("id").get<std::string>();
  p.subreddit = j.at("subreddit").get<std::string>();
  p.title = j.value("title", std::string{});
  p.created_at = require_int(j, "created_utc");
  p.score = require_int(j, "score");
  if (p.post_id.empty()) throw std::invalid_argument("empty id");
  if (p.created_at <= 0) throw std::invalid_argument("created_utc must be positive");

  if (auto it = j.find("video_id"); it != j.end()) {
    if (!it->is_null()) {
      auto id = it->get<std::string>();
      if (is_valid_video_id(id)) p.video_id = std::move(id);
    }
  } else if (auto u = j.find("url"); u != j.end() && u->is_string()) {
    p.video_id = extract_video_id(u->get<std::string>());
  } else {
    throw std::invalid_argument("missing url and video_id");
  }

  const auto type = j.value("post_type", std::string{"video"});
  if (type == "video") {
    p.post_type = PostType::video;
  } else if (type == "text") {
    p.post_type = PostType::text;
  } else {
    throw std::invalid_argument("unknown post_type");
  }
  return p;
}

VideoRecord video_from_json(const nlohmann::json& j) {
  VideoRecord v;
  v.video_id = j.at("video_id").get<std::string>();
  v.title = j.value("title", std::string{});
  v.views = require_int(j, "views");
  v.category = j.value("category", std::string{});
  if (auto it = j.find("tags"); it != j.end() && !it->is_null()) v.tags = it->get<std::vector<std::string>>();
  if (v.video_id.empty()) throw std::invalid_argument("empty video_id");
  if (v.views < 0) throw std::invalid_argument("negative views");
  return v;
}

template <class Fn>
void for_each_line(std::istream& in, ParseStats& stats, Fn&& fn) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    ++stats.lines;
    try {
      fn(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception&) {
      ++stats.skipped;
    } catch (const std::invalid_argument&) {
      ++stats.skipped;
    }
  }
  if (in.bad()) throw Error(ErrorKind::io, "IO_ERROR", "stream read failure while parsing");
}

}  // namespace

bool is_valid_video_id(std::string_view id) {
  if (id.size() != 11) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

std::optional<std::string> extract_video_id(std::string_view url) {
  auto rest = url;
  while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.front()))) rest.remove_prefix(1);
  while (!rest.empty() && std::isspace(static_cast<unsigned char>(rest.back()))) rest.remove_suffix(1);

  if (const auto scheme = rest.find("://"); scheme != std::string_view::npos) {
    const auto s = lower_ascii(rest.substr(0, scheme));
    if (s != "http" && s != "https") return std::nullopt;
    rest.remove_prefix(scheme + 3);
  }

  const auto host_end = rest.find_first_of("/?#");
  const auto host = lower_ascii(rest.substr(0, host_end));
  rest = host_end == std::string_view::npos ? std::string_view{} : rest.substr(host_end);

  if (const auto frag = rest.find('#'); frag != std::string_view::npos) rest = rest.substr(0, frag);
  std::string_view path = rest;
  std::string_view query;
  if (const auto q = rest.find('?'); q != std::string_view::npos) {
    path = rest.substr(0, q);
    query = rest.substr(q + 1);
  }

  std::string_view candidate;
  if (host == "www.youtube.com" || host == "youtube.com" || host == "m.youtube.com") {
    if (path != "/watch" && path != "/watch/") return std::nullopt;
    const auto v = query_param(query, "v");
    if (!v) return std::nullopt;
    candidate = *v;
  } else if (host == "youtu.be") {
    if (path.size() < 2) return std::nullopt;
    candidate = path.substr(1);
    if (!candidate.empty() && candidate.back() == '/') candidate.remove_suffix(1);
  } else {
    return std::nullopt;
  }

  if (!is_valid_video_id(candidate)) return std::nullopt;
  return std::string(candidate);
}

ParsedPosts parse_posts(std::istream& in) {
  ParsedPosts out;
  std::unordered_set<std::string> seen;
  for_each_line(in, out.stats, [&](const nlohmann::json& j) {
    auto p = post_from_json(j);
    if (!seen.insert(p.post_id).second) {
      ++out.stats.duplicates;
      return;
    }
    if (!p.video_id) ++out.stats.droppable;
    out.records.push_back(std::move(p));
  });
  out.stats.records = out.records.size();
  if (out.stats.duplicates > 0)
    std::clog << "warning: " << out.stats.duplicates << " duplicate post id(s), first occurrence kept\n";
  return out;
}

ParsedVideos parse_videos(std::istream& in) {
  ParsedVideos out;
  for_each_line(in, out.stats, [&](const nlohmann::json& j) {
    auto v = video_from_json(j);
    auto [it, inserted] = out.catalog.try_emplace(v.video_id, v);
    if (!inserted) {
      ++out.stats.duplicates;
      std::clog << "warning: duplicate video id " << v.video_id << ", keeping larger view count\n";
      if (v.views > it->second.views) it->second = std::move(v);
    }
  });
  out.stats.records = out.catalog.size();
  return out;
}

std::vector<JoinedPost> parse_joined(std::istream& in) {
  std::vector<JoinedPost> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      JoinedPost jp;
      jp.post = post_from_json(j);
      if (!jp.post.video_id) throw std::invalid_argument("joined post without video_id");
      jp.video_views = require_int(j, "video_views");
      jp.video_category = j.at("video_category").get<std::string>();
      jp.video_title = j.at("video_title").get<std::string>();
      out.push_back(std::move(jp));
    } catch (const std::exception& e) {
      throw Error(ErrorKind::validation, "BAD_JOINED_RECORD",
                  "joined.jsonl line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (in.bad()) throw Error(ErrorKind::io, "IO_ERROR", "stream read failure while parsing joined posts");
  return out;
}

JoinResult join_posts_videos(const std::vector<PostRecord>& posts, const VideoCatalog& catalog) {
  JoinResult out;
  out.input_size = posts.size();
  for (const auto& p : posts) {
    if (!p.video_id) continue;
    const auto it = catalog.find(*p.video_id);
    if (it == catalog.end()) continue;
    out.posts.push_back(JoinedPost{p, it->second.views, it->second.category, it->second.title});
  }
  return out;
}

SubredditFilterResult filter_subreddits(const std::vector<JoinedPost>& posts, std::int64_t min_posts,
                                        std::optional<std::int64_t> top_k) {
  if (min_posts < 1) throw Error(ErrorKind::config, "BAD_CONFIG", "min_posts must be >= 1");

  std::map<std::string, std::vector<std::int64_t>> scores;
  for (const auto& p : posts) {
    if (p.post.title.empty()) continue;
    scores[p.post.subreddit].push_back(p.post.score);
  }

  std::vector<std::pair<std::string, std::size_t>> ranked;
  for (const auto& [name, s] : scores)
    if (static_cast<std::int64_t>(s.size()) >= min_posts) ranked.emplace_back(name, s.size());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (top_k && static_cast<std::int64_t>(ranked.size()) > *top_k) ranked.resize(static_cast<std::size_t>(*top_k));

  std::set<std::string> keep;
  for (const auto& r : ranked) keep.insert(r.first);

  SubredditFilterResult out;
  for (const auto& p : posts)
    if (!p.post.title.empty() && keep.contains(p.post.subreddit)) out.posts.push_back(p);

  for (const auto& name : keep) {
    auto s = scores.at(name);
    std::sort(s.begin(), s.end());
    SubredditSummary sum;
    sum.subreddit = name;
    sum.n_posts = static_cast<std::int64_t>(s.size());
    sum.mean_score = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
    const auto n = s.size();
    sum.median_score = n % 2 == 1 ? static_cast<double>(s[n / 2])
                                  : 0.5 * (static_cast<double>(s[n / 2 - 1]) + static_cast<double>(s[n / 2]));
    out.summaries.push_back(std::move(sum));
  }
  return out;
}

std::string to_string(PostType type) { return type == PostType::video ? "video" : "text"; }

nlohmann::json post_to_json(const PostRecord& p) {
  nlohmann::json j;
  j["id"] = p.post_id;
  j["subreddit"] = p.subreddit;
  j["title"] = p.title;
  j["created_utc"] = p.created_at;
  j["score"] = p.score;
  if (p.video_id) {
    j["video_id"] = *p.video_id;
  } else {
    j["video_id"] = nullptr;
  }
  j["post_type"] = to_string(p.post_type);
  return j;
}

nlohmann::json video_to_json(const VideoRecord& v) {
  return nlohmann::json{{"video_id", v.video_id}, {"title", v.title}, {"views", v.views},
                        {"category", v.category}, {"tags", v.tags}};
}

nlohmann::json joined_to_json(const JoinedPost& p) {
  auto j = post_to_json(p.post);
  j["video_views"] = p.video_views;
  j["video_category"] = p.video_category;
  j["video_title"] = p.video_title;
  return j;
}

}  // namespace pairlens
