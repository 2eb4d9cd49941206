#ifndef CORG_COPA_HPP
#define CORG_COPA_HPP

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "corg/clausify.hpp"
#include "corg/error.hpp"
#include "corg/fol.hpp"
#include "corg/io.hpp"
#include "corg/model_builder.hpp"
#include "corg/tptp.hpp"

namespace corg {

// ---- a strict reader for the small XML subset COPA files use -------------

namespace xml {

struct Element {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<Element> children;
  std::string text;  // concatenated character data of this element
  std::size_t line = 0;

  const std::string* attribute(std::string_view key) const {
    for (const auto& [k, v] : attributes) {
      if (k == key) return &v;
    }
    return nullptr;
  }
  const Element* child(std::string_view n) const {
    for (const auto& c : children) {
      if (c.name == n) return &c;
    }
    return nullptr;
  }
};

class Reader {
 public:
  explicit Reader(std::string_view src) : src_(src) {}

  Element document() {
    skip_misc();
    if (!starts("<")) fail("expected root element");
    Element root = element();
    skip_misc();
    if (i_ < src_.size()) fail("content after the root element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    std::string where = "line " + std::to_string(line_);
    for (auto it = open_.rbegin(); it != open_.rend(); ++it) {
      if (it->first == "item" && !it->second.empty()) {
        where += ", item " + it->second;
        break;
      }
    }
    throw PositionedError(ErrorKind::xml_error, line_, where + ": " + what);
  }

  bool starts(std::string_view s) const { return src_.substr(i_, s.size()) == s; }

  void advance(std::size_t n = 1) {
    for (std::size_t k = 0; k < n && i_ < src_.size(); ++k) {
      if (src_[i_] == '\n') ++line_;
      ++i_;
    }
  }

  void skip_until(std::string_view end) {
    while (i_ < src_.size() && !starts(end)) advance();
    if (i_ >= src_.size()) fail("unterminated markup, expected '" + std::string(end) + "'");
    advance(end.size());
  }

  void skip_space() {
    while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) advance();
  }

  void skip_misc() {
    while (true) {
      skip_space();
      if (starts("<?")) skip_until("?>");
      else if (starts("<!--")) skip_until("-->");
      else if (starts("<!DOCTYPE")) skip_until(">");
      else return;
    }
  }

  std::string name() {
    std::size_t start = i_;
    while (i_ < src_.size()) {
      unsigned char c = static_cast<unsigned char>(src_[i_]);
      if (std::isalnum(c) || c == '-' || c == '_' || c == ':' || c == '.') advance();
      else break;
    }
    if (i_ == start) fail("expected a name");
    return std::string(src_.substr(start, i_ - start));
  }

  std::string decode(std::string_view raw) {
    std::string out;
    for (std::size_t k = 0; k < raw.size(); ++k) {
      if (raw[k] != '&') {
        out.push_back(raw[k]);
        continue;
      }
      auto semi = raw.find(';', k);
      if (semi == std::string_view::npos) fail("unterminated entity");
      std::string_view ent = raw.substr(k + 1, semi - k - 1);
      if (ent == "lt") out.push_back('<');
      else if (ent == "gt") out.push_back('>');
      else if (ent == "amp") out.push_back('&');
      else if (ent == "quot") out.push_back('"');
      else if (ent == "apos") out.push_back('\'');
      else if (ent.size() > 1 && ent[0] == '#') {
        bool hex = ent[1] == 'x' || ent[1] == 'X';
        std::string digits(ent.substr(hex ? 2 : 1));
        unsigned long cp = 0;
        try {
          cp = std::stoul(digits, nullptr, hex ? 16 : 10);
        } catch (const std::exception&) {
          fail("bad character reference &" + std::string(ent) + ";");
        }
        append_utf8(out, cp);
      } else {
        fail("unknown entity &" + std::string(ent) + ";");
      }
      k = semi;
    }
    return out;
  }

  static void append_utf8(std::string& out, unsigned long cp) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }

  Element element() {
    Element e;
    e.line = line_;
    advance();  // '<'
    e.name = name();
    while (true) {
      skip_space();
      if (starts("/>")) {
        advance(2);
        return e;
      }
      if (starts(">")) {
        advance();
        break;
      }
      std::string key = name();
      skip_space();
      if (!starts("=")) fail("expected '=' after attribute " + key);
      advance();
      skip_space();
      if (i_ >= src_.size() || (src_[i_] != '"' && src_[i_] != '\'')) fail("expected quoted value");
      char q = src_[i_];
      advance();
      std::size_t start = i_;
      while (i_ < src_.size() && src_[i_] != q) advance();
      if (i_ >= src_.size()) fail("unterminated attribute value");
      e.attributes.emplace_back(key, decode(src_.substr(start, i_ - start)));
      advance();
    }
    const std::string* id = e.attribute("id");
    open_.emplace_back(e.name, id ? *id : std::string());
    while (true) {
      if (i_ >= src_.size()) fail("unexpected end of input inside <" + e.name + ">");
      if (starts("</")) {
        advance(2);
        std::string closing = name();
        skip_space();
        if (!starts(">")) fail("expected '>'");
        advance();
        if (closing != e.name) fail("</" + closing + "> does not close <" + e.name + ">");
        open_.pop_back();
        return e;
      }
      if (starts("<!--")) {
        skip_until("-->");
        continue;
      }
      if (starts("<![CDATA[")) {
        advance(9);
        std::size_t start = i_;
        while (i_ < src_.size() && !starts("]]>")) advance();
        if (i_ >= src_.size()) fail("unterminated CDATA");
        e.text += src_.substr(start, i_ - start);
        advance(3);
        continue;
      }
      if (starts("<")) {
        e.children.push_back(element());
        continue;
      }
      std::size_t start = i_;
      while (i_ < src_.size() && src_[i_] != '<') advance();
      e.text += decode(src_.substr(start, i_ - start));
    }
  }

  std::string_view src_;
  std::size_t i_ = 0;
  std::size_t line_ = 1;
  std::vector<std::pair<std::string, std::string>> open_;
};

inline Element parse(std::string_view src) { return Reader(src).document(); }

}  // namespace xml

// ---- problems ------------------------------------------------------------

enum class Question { cause, effect };

inline const char* to_string(Question q) { return q == Question::cause ? "cause" : "effect"; }

struct CopaProblem {
  long long id = 0;
  std::string premise;
  Question question = Question::cause;
  std::vector<std::string> alternatives;
  std::optional<std::size_t> gold;  // 0-based
};

namespace detail {

inline std::string collapse_whitespace(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : io::trim(s)) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = true;
      continue;
    }
    if (space && !out.empty()) out.push_back(' ');
    space = false;
    out.push_back(c);
  }
  return out;
}

}  // namespace detail

// <item id=".." asks-for="cause|effect" most-plausible-alternative="1|2">
//   <p>..</p><a1>..</a1><a2>..</a2></item>
inline std::vector<CopaProblem> parse_copa_xml_text(std::string_view text) {
  xml::Element root = xml::parse(text);
  std::vector<CopaProblem> out;
  for (const auto& item : root.children) {
    if (item.name != "item") continue;
    const std::string* id = item.attribute("id");
    std::string label = id ? *id : "at line " + std::to_string(item.line);
    auto missing = [&](const std::string& field) {
      return Error(ErrorKind::missing_field, "item " + label + ": missing " + field);
    };
    if (!id) throw missing("id");
    auto id_value = io::parse_int(*id);
    if (!id_value) throw Error(ErrorKind::xml_error, "item " + label + ": id is not an integer");

    CopaProblem p;
    p.id = *id_value;
    const std::string* asks = item.attribute("asks-for");
    if (!asks) throw missing("asks-for");
    if (*asks == "cause") p.question = Question::cause;
    else if (*asks == "effect") p.question = Question::effect;
    else throw Error(ErrorKind::xml_error, "item " + label + ": asks-for must be cause or effect");

    const xml::Element* premise = item.child("p");
    if (!premise) throw missing("p");
    p.premise = detail::collapse_whitespace(premise->text);
    for (std::size_t k = 1;; ++k) {
      const xml::Element* a = item.child("a" + std::to_string(k));
      if (!a) break;
      p.alternatives.push_back(detail::collapse_whitespace(a->text));
    }
    if (p.alternatives.size() < 2) throw missing(p.alternatives.empty() ? "a1" : "a2");

    if (const std::string* gold = item.attribute("most-plausible-alternative")) {
      auto g = io::parse_int(*gold);
      if (!g || *g < 1 || static_cast<std::size_t>(*g) > p.alternatives.size()) {
        throw Error(ErrorKind::xml_error,
                    "item " + label + ": most-plausible-alternative out of range");
      }
      p.gold = static_cast<std::size_t>(*g - 1);
    }
    out.push_back(std::move(p));
  }
  return out;
}

inline std::vector<CopaProblem> parse_copa_xml(const std::string& path) {
  return parse_copa_xml_text(io::read_file(path));
}

// ---- text to facts -------------------------------------------------------

// The common English stopword list (the NLTK one).
inline const std::unordered_set<std::string>& default_stopwords() {
  static const std::unordered_set<std::string> words{
      "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "your", "yours",
      "yourself", "yourselves", "he", "him", "his", "himself", "she", "her", "hers", "herself",
      "it", "its", "itself", "they", "them", "their", "theirs", "themselves", "what", "which",
      "who", "whom", "this", "that", "these", "those", "am", "is", "are", "was", "were", "be",
      "been", "being", "have", "has", "had", "having", "do", "does", "did", "doing", "a", "an",
      "the", "and", "but", "if", "or", "because", "as", "until", "while", "of", "at", "by",
      "for", "with", "about", "against", "between", "into", "through", "during", "before",
      "after", "above", "below", "to", "from", "up", "down", "in", "out", "on", "off", "over",
      "under", "again", "further", "then", "once", "here", "there", "when", "where", "why",
      "how", "all", "any", "both", "each", "few", "more", "most", "other", "some", "such", "no",
      "nor", "not", "only", "own", "same", "so", "than", "too", "very", "s", "t", "can", "will",
      "just", "don", "should", "now", "d", "ll", "m", "o", "re", "ve", "y", "ain", "aren",
      "couldn", "didn", "doesn", "hadn", "hasn", "haven", "isn", "ma", "mightn", "mustn",
      "needn", "shan", "shouldn", "wasn", "weren", "won", "wouldn",
  };
  return words;
}

inline std::unordered_set<std::string> load_stopwords(const std::string& path) {
  io::LineReader reader(path);
  std::unordered_set<std::string> out;
  std::string line;
  while (reader.next(line)) {
    auto w = io::trim(std::string_view(line).substr(0, line.find('#')));
    if (!w.empty()) out.insert(io::to_lower(w));
  }
  return out;
}

// Lowercased alphanumeric runs that are not stopwords, in order, unique.
inline std::vector<std::string> content_words(std::string_view text,
                                              const std::unordered_set<std::string>& stopwords) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty() && !stopwords.contains(cur) && seen.insert(cur).second) out.push_back(cur);
    cur.clear();
  };
  for (char c : text) {
    unsigned char u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) cur.push_back(static_cast<char>(std::tolower(u)));
    else flush();
  }
  flush();
  return out;
}

enum class TextMode { fol_file, bag_of_words };

enum class TextRole { premise, alternative };

// Sidecar name for a text: <dir>/<id>_p.fol for the premise, <id>_a<k>.fol
// for alternative k (1-based), mirroring the XML element names.
inline std::string sidecar_role(TextRole role, std::size_t alternative = 0) {
  return role == TextRole::premise ? "p" : "a" + std::to_string(alternative + 1);
}

inline std::filesystem::path sidecar_path(const std::filesystem::path& dir, long long id,
                                          const std::string& role) {
  return dir / (std::to_string(id) + "_" + role + ".fol");
}

struct TextTheory {
  std::vector<GroundAtom> facts;
  std::vector<fol::Clause> rules;  // non-unit clauses coming from a parsed formula
  std::optional<fol::Formula> formula;
  std::vector<std::string> warnings;
};

inline constexpr const char* kTextConstant = "c0";
inline constexpr const char* kTextAxiomId = "q";

inline TextTheory facts_from_formula(const fol::Formula& f) {
  TextTheory out;
  out.formula = f;
  for (auto& c : fol::clausify(f, kTextAxiomId)) {
    if (c.is_fact()) out.facts.push_back(std::move(c.head[0]));
    else out.rules.push_back(std::move(c));
  }
  return out;
}

inline TextTheory facts_from_words(std::string_view text,
                                   const std::unordered_set<std::string>& stopwords) {
  TextTheory out;
  for (auto& w : content_words(text, stopwords)) {
    out.facts.push_back(GroundAtom{std::move(w), {fol::Term::constant(kTextConstant)}});
  }
  if (io::trim(text).empty()) out.warnings.emplace_back("empty text");
  else if (out.facts.empty()) out.warnings.emplace_back("no content words");
  return out;
}

struct TextSource {
  TextMode mode = TextMode::bag_of_words;
  std::filesystem::path fol_dir;
  std::unordered_set<std::string> stopwords = default_stopwords();
};

// Throws MissingFormula in fol_file mode when the sidecar does not exist.
inline TextTheory text_to_facts(std::string_view text, const TextSource& src, long long problem_id,
                                const std::string& role) {
  if (src.mode == TextMode::bag_of_words) return facts_from_words(text, src.stopwords);
  auto path = sidecar_path(src.fol_dir, problem_id, role);
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorKind::missing_formula, "problem " + std::to_string(problem_id) + ", role " +
                                                role + ": no formula file " + path.string());
  }
  return facts_from_formula(fol::parse_fol(io::read_file(path.string())));
}

}  // namespace corg

#endif  // CORG_COPA_HPP
