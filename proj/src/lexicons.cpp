#include <fstream>

#include "pairlens/csv.hpp"
#include "pairlens/error.hpp"
#include "pairlens/textmetrics.hpp"

namespace pairlens {

namespace {

std::unordered_set<std::string> keys_of(const std::unordered_map<std::string, double>& m) {
  std::unordered_set<std::string> out;
  for (const auto& [k, v] : m)
    if (v != 0.0) out.insert(k);
  return out;
}

}  // namespace

std::unordered_map<std::string, double> read_lexicon_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::config, "LEXICON_MISSING", "lexicon file not found: " + path.string());
  std::unordered_map<std::string, double> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    double value = 1.0;
    if (tab != std::string::npos) {
      const auto field = line.substr(tab + 1, line.find('\t', tab + 1) - tab - 1);
      if (!csv::parse_double(field, value))
        throw Error(ErrorKind::config, "LEXICON_INVALID",
                    path.string() + ":" + std::to_string(lineno) + ": bad value '" + field + "'");
    }
    out[line.substr(0, tab)] = value;
  }
  return out;
}

const std::vector<std::string>& Lexicons::file_names() {
  static const std::vector<std::string> names{
      "vader_lexicon.txt", "vader_boosters.txt", "negations.txt",      "pronouns.txt",
      "interrogatives.txt", "tentative.txt",     "certainty.txt",      "affiliation.txt",
      "tb_subjectivity.txt", "tb_polarity.txt",  "swn_polarity.txt",   "nrc_emotion.txt"};
  return names;
}

Lexicons Lexicons::load(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw Error(ErrorKind::config, "LEXICON_MISSING", "lexicon directory not found: " + dir.string());
  const auto read = [&](const char* name) { return read_lexicon_file(dir / name); };
  Lexicons lex;
  lex.valence = read("vader_lexicon.txt");
  lex.boosters = read("vader_boosters.txt");
  lex.negations = keys_of(read("negations.txt"));
  lex.pronouns = keys_of(read("pronouns.txt"));
  lex.interrogatives = keys_of(read("interrogatives.txt"));
  lex.tentative = keys_of(read("tentative.txt"));
  lex.certainty = keys_of(read("certainty.txt"));
  lex.affiliation = keys_of(read("affiliation.txt"));
  lex.subjectivity = read("tb_subjectivity.txt");
  lex.polarity = read("tb_polarity.txt");
  lex.swn_polarity = read("swn_polarity.txt");
  lex.emotion = read("nrc_emotion.txt");
  return lex;
}

}  // namespace pairlens
