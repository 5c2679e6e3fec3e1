// Copyright 2026 The absa-prompt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "absa/corpus.h"
#include "absa/error.h"
#include "absa/text.h"
#include "json.hpp"

namespace absa {
namespace {

namespace pt = boost::property_tree;
using json = nlohmann::json;

// Byte offset of the `index`-th code point of a UTF-8 string, or npos when
// the string is shorter.
size_t CodePointToByte(std::string_view s, size_t index) {
  size_t cp = 0;
  for (size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || (static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) {
      if (cp == index) return i;
      ++cp;
    }
  }
  return std::string_view::npos;
}

std::optional<size_t> ParseOffset(const std::optional<std::string>& s) {
  if (!s) return std::nullopt;
  std::string_view t = Trim(*s);
  if (t.empty()) return std::nullopt;
  size_t value = 0;
  for (char c : t) {
    if (c < '0' || c > '9') return std::nullopt;
    value = value * 10 + static_cast<size_t>(c - '0');
  }
  return value;
}

// SemEval offsets count characters, not bytes.
bool SpanMatches(std::string_view text, const CharSpan& span,
                 std::string_view term) {
  if (span.to < span.from) return false;
  size_t begin = CodePointToByte(text, span.from);
  size_t end = CodePointToByte(text, span.to);
  if (begin == std::string_view::npos || end == std::string_view::npos) {
    return false;
  }
  return text.substr(begin, end - begin) == term;
}

void AddAspect(ReviewSentence& sentence, AspectAnnotation aspect,
               LoadDiagnostics* diagnostics) {
  std::string key = AsciiLower(Trim(aspect.term));
  for (const AspectAnnotation& existing : sentence.aspects) {
    if (existing.polarity == aspect.polarity &&
        AsciiLower(Trim(existing.term)) == key) {
      if (diagnostics != nullptr) {
        ++diagnostics->merged_duplicate_aspects;
        diagnostics->warnings.push_back("sentence " + sentence.id +
                                        ": merged duplicate aspect '" +
                                        aspect.term + "'");
      }
      return;
    }
  }
  sentence.aspects.push_back(std::move(aspect));
}

AspectAnnotation ReadAspect(const pt::ptree& node, const ReviewSentence& sentence,
                            LoadDiagnostics* diagnostics) {
  const auto attrs = node.get_child_optional("<xmlattr>");
  auto attr = [&](const char* name) -> std::optional<std::string> {
    if (!attrs) return std::nullopt;
    auto v = attrs->get_optional<std::string>(name);
    return v ? std::optional<std::string>(*v) : std::nullopt;
  };

  AspectAnnotation aspect;
  std::optional<std::string> term = attr("term");
  if (!term || Trim(*term).empty()) {
    throw Error(ErrorCode::kSchemaViolation,
                "sentence " + sentence.id + ": aspectTerm with empty term");
  }
  aspect.term = *term;

  std::optional<std::string> polarity = attr("polarity");
  if (!polarity) {
    throw Error(ErrorCode::kSchemaViolation,
                "sentence " + sentence.id + ": aspectTerm '" + *term +
                    "' has no polarity");
  }
  std::optional<Polarity> parsed = ParsePolarity(*polarity);
  if (!parsed) {
    throw Error(ErrorCode::kSchemaViolation,
                "sentence " + sentence.id + ": unknown polarity '" +
                    *polarity + "'");
  }
  aspect.polarity = *parsed;

  std::optional<std::string> from = attr("from");
  std::optional<std::string> to = attr("to");
  if (from || to) {
    const std::optional<size_t> f = ParseOffset(from);
    const std::optional<size_t> t = ParseOffset(to);
    const CharSpan span{f.value_or(0), t.value_or(0)};
    if (f && t && SpanMatches(sentence.text, span, aspect.term)) {
      aspect.span = span;
    } else if (diagnostics != nullptr) {
      diagnostics->warnings.push_back("sentence " + sentence.id +
                                      ": offsets of '" + aspect.term +
                                      "' do not match the text; span dropped");
    }
  }
  return aspect;
}

ReviewSentence ReadSentence(const pt::ptree& node, Domain domain,
                            LoadDiagnostics* diagnostics) {
  ReviewSentence sentence;
  sentence.domain = domain;
  auto id = node.get_optional<std::string>("<xmlattr>.id");
  if (!id || Trim(*id).empty()) {
    throw Error(ErrorCode::kSchemaViolation, "sentence element without id");
  }
  sentence.id = *id;

  auto text = node.get_child_optional("text");
  if (!text || Trim(text->data()).empty()) {
    throw Error(ErrorCode::kSchemaViolation,
                "sentence " + sentence.id + ": missing or empty text");
  }
  sentence.text = text->data();

  if (auto terms = node.get_child_optional("aspectTerms")) {
    for (const auto& [name, child] : *terms) {
      if (name != "aspectTerm") continue;
      AddAspect(sentence, ReadAspect(child, sentence, diagnostics),
                diagnostics);
    }
  }
  return sentence;
}

json SentenceToJson(const ReviewSentence& sentence, Split split) {
  json aspects = json::array();
  for (const AspectAnnotation& aspect : sentence.aspects) {
    json a = {{"term", aspect.term},
              {"polarity", std::string(PolarityName(aspect.polarity))}};
    if (aspect.span) {
      a["from"] = aspect.span->from;
      a["to"] = aspect.span->to;
    }
    aspects.push_back(std::move(a));
  }
  return json{{"id", sentence.id},
              {"domain", std::string(DomainName(sentence.domain))},
              {"split", std::string(SplitName(split))},
              {"text", sentence.text},
              {"aspects", std::move(aspects)}};
}

}  // namespace

Corpus ParseSemevalXml(std::string_view xml, Domain domain, Split split,
                       std::string_view source_name,
                       LoadDiagnostics* diagnostics) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(xml)};
    pt::read_xml(in, tree, pt::xml_parser::no_comments);
  } catch (const pt::xml_parser_error& e) {
    throw Error(ErrorCode::kMalformedXml,
                std::string(source_name) + " line " +
                    std::to_string(e.line()) + ": " + e.message());
  }

  // Root element name varies between releases; take the first element that
  // holds sentence children.
  const pt::ptree* root = nullptr;
  for (const auto& [name, child] : tree) {
    if (name == "<xmlcomment>" || name == "<xmlattr>") continue;
    root = &child;
    break;
  }
  if (root == nullptr) {
    throw Error(ErrorCode::kSchemaViolation,
                std::string(source_name) + ": no root element");
  }

  Corpus corpus;
  corpus.domain = domain;
  corpus.split = split;
  std::set<std::string> seen;
  for (const auto& [name, child] : *root) {
    if (name != "sentence") continue;
    ReviewSentence sentence = ReadSentence(child, domain, diagnostics);
    if (!seen.insert(sentence.id).second) {
      throw Error(ErrorCode::kDuplicateId, std::string(source_name) +
                                               ": duplicate sentence id " +
                                               sentence.id);
    }
    corpus.sentences.push_back(std::move(sentence));
  }
  return corpus;
}

Corpus LoadSemevalXml(const std::filesystem::path& path, Domain domain,
                      Split split, LoadDiagnostics* diagnostics) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseSemevalXml(buffer.str(), domain, split, path.string(),
                         diagnostics);
}

void WriteCorpusJsonl(const Corpus& corpus, std::ostream& out) {
  for (const ReviewSentence& sentence : corpus.sentences) {
    out << SentenceToJson(sentence, corpus.split).dump() << '\n';
  }
}

void WriteCorpusJsonl(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  WriteCorpusJsonl(corpus, out);
}

Corpus ReadCorpusJsonl(std::istream& in, std::string_view source_name) {
  Corpus corpus;
  std::set<Domain> domains;
  std::optional<Split> split;
  std::set<std::string> seen;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    std::string where = std::string(source_name) + ":" + std::to_string(line_no);
    json record;
    try {
      record = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kSchemaViolation, where + ": " + e.what());
    }
    try {
      ReviewSentence sentence;
      sentence.id = record.at("id").get<std::string>();
      sentence.text = record.at("text").get<std::string>();
      if (Trim(sentence.text).empty()) {
        throw Error(ErrorCode::kSchemaViolation,
                    where + ": sentence " + sentence.id + " has empty text");
      }
      auto domain = ParseDomain(record.at("domain").get<std::string>());
      if (!domain || *domain == Domain::kMixed) {
        throw Error(ErrorCode::kSchemaViolation, where + ": bad domain");
      }
      sentence.domain = *domain;
      domains.insert(*domain);
      if (record.contains("split")) {
        auto s = ParseSplit(record["split"].get<std::string>());
        if (!s) throw Error(ErrorCode::kSchemaViolation, where + ": bad split");
        split = *s;
      }
      for (const json& a : record.at("aspects")) {
        AspectAnnotation aspect;
        aspect.term = a.at("term").get<std::string>();
        if (Trim(aspect.term).empty()) {
          throw Error(ErrorCode::kSchemaViolation,
                      where + ": sentence " + sentence.id + " has empty term");
        }
        auto p = ParsePolarity(a.at("polarity").get<std::string>());
        if (!p) {
          throw Error(ErrorCode::kSchemaViolation,
                      where + ": sentence " + sentence.id +
                          " has unknown polarity");
        }
        aspect.polarity = *p;
        if (a.contains("from") && a.contains("to")) {
          aspect.span =
              CharSpan{a["from"].get<size_t>(), a["to"].get<size_t>()};
        }
        sentence.aspects.push_back(std::move(aspect));
      }
      if (!seen.insert(sentence.id).second) {
        throw Error(ErrorCode::kDuplicateId,
                    where + ": duplicate sentence id " + sentence.id);
      }
      corpus.sentences.push_back(std::move(sentence));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kSchemaViolation, where + ": " + e.what());
    }
  }
  corpus.split = split.value_or(Split::kTrain);
  if (domains.size() > 1) {
    corpus.domain = Domain::kMixed;
  } else if (domains.size() == 1) {
    corpus.domain = *domains.begin();
  }
  return corpus;
}

Corpus ReadCorpusJsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return ReadCorpusJsonl(in, path.string());
}

Corpus LoadCorpusFile(const std::filesystem::path& path,
                      std::optional<Domain> domain, std::optional<Split> split,
                      LoadDiagnostics* diagnostics) {
  if (AsciiLower(path.extension().string()) == ".xml") {
    if (!domain || !split) {
      throw Error(ErrorCode::kInvalidArgument,
                  path.string() + ": XML input needs an explicit domain and split");
    }
    return LoadSemevalXml(path, *domain, *split, diagnostics);
  }
  Corpus corpus = ReadCorpusJsonl(path);
  if (domain && corpus.domain != Domain::kMixed) corpus.domain = *domain;
  if (split) corpus.split = *split;
  return corpus;
}

}  // namespace absa
