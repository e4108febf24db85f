#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace pairlens {

enum class PostType { video, text };

/// One shared post as read from a posts dump.
struct PostRecord {
  std::string post_id;
  std::string subreddit;
  std::string title;
  std::int64_t created_at = 0;  // epoch seconds, UTC
  std::int64_t score = 0;
  std::optional<std::string> video_id;  // absent when the url is not a direct watch link
  PostType post_type = PostType::video;

  bool operator==(const PostRecord&) const = default;
};

struct VideoRecord {
  std::string video_id;
  std::string title;
  std::int64_t views = 0;
  std::string category;
  std::vector<std::string> tags;

  bool operator==(const VideoRecord&) const = default;
};

using VideoCatalog = std::map<std::string, VideoRecord>;

/// A post joined with the metadata of the video it links.
struct JoinedPost {
  PostRecord post;
  std::int64_t video_views = 0;
  std::string video_category;
  std::string video_title;

  const std::string& id() const { return post.post_id; }
  const std::string& video_id() const { return *post.video_id; }

  bool operator==(const JoinedPost&) const = default;
};

struct SubredditSummary {
  std::string subreddit;
  std::optional<std::int64_t> n_users;
  std::int64_t n_posts = 0;
  double mean_score = 0.0;
  double median_score = 0.0;
};

struct ParseStats {
  std::size_t lines = 0;
  std::size_t records = 0;
  std::size_t skipped = 0;     // malformed lines
  std::size_t duplicates = 0;  // repeated ids (first occurrence kept)
  std::size_t droppable = 0;   // posts without a usable video id
};

struct ParsedPosts {
  std::vector<PostRecord> records;
  ParseStats stats;
};

struct ParsedVideos {
  VideoCatalog catalog;
  ParseStats stats;
};

struct JoinResult {
  std::vector<JoinedPost> posts;
  std::size_t input_size = 0;
  double join_rate() const {
    return input_size == 0 ? 0.0 : static_cast<double>(posts.size()) / static_cast<double>(input_size);
  }
};

struct SubredditFilterResult {
  std::vector<JoinedPost> posts;
  std::vector<SubredditSummary> summaries;  // sorted by subreddit name
};

/// Returns the 11-character video id for direct watch links on the known
/// hosts, nothing for channels, playlists, profiles and malformed URLs.
std::optional<std::string> extract_video_id(std::string_view url);

bool is_valid_video_id(std::string_view id);

ParsedPosts parse_posts(std::istream& in);
ParsedVideos parse_videos(std::istream& in);

/// Reads the joined.jsonl schema written by joined_to_json.
std::vector<JoinedPost> parse_joined(std::istream& in);

JoinResult join_posts_videos(const std::vector<PostRecord>& posts, const VideoCatalog& catalog);

/// Keeps posts from subreddits that have at least `min_posts` valid posts and
/// rank within the `top_k` largest. A valid post is a joined post with a
/// non-empty title.
SubredditFilterResult filter_subreddits(const std::vector<JoinedPost>& posts, std::int64_t min_posts = 1000,
                                        std::optional<std::int64_t> top_k = 5000);

nlohmann::json post_to_json(const PostRecord& post);
nlohmann::json video_to_json(const VideoRecord& video);
nlohmann::json joined_to_json(const JoinedPost& post);

std::string to_string(PostType type);

}  // namespace pairlens
