/*!
 * \file mr_tree.cc
 */
#include <treemr/error.h>
#include <treemr/mr_tree.h>

#include <cctype>
#include <sstream>

namespace treemr {

std::string Token::ToString() const {
  switch (type) {
    case Type::kOpen:
      return "[" + text;
    case Type::kClose:
      return std::string(kCloseString);
    case Type::kWord:
      return text;
    case Type::kEos:
      return std::string(kEosString);
  }
  return text;
}

Token Token::FromString(std::string_view s) {
  if (s == kEosString) return Eos();
  if (s == kCloseString) return Close();
  if (!s.empty() && s.front() == '[') return Open(std::string(s.substr(1)));
  return Word(std::string(s));
}

std::vector<Token> Tokenize(std::string_view text) {
  std::vector<Token> out;
  size_t i = 0;
  auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  auto is_break = [&](char c) { return is_space(c) || c == '[' || c == ']'; };
  while (i < text.size()) {
    char c = text[i];
    if (is_space(c)) {
      ++i;
    } else if (c == ']') {
      out.push_back(Token::Close());
      ++i;
    } else if (c == '[') {
      size_t j = i + 1;
      while (j < text.size() && !is_break(text[j])) ++j;
      if (j == i + 1) throw UnknownLabel("'[' without a label at offset " + std::to_string(i));
      out.push_back(Token::Open(std::string(text.substr(i + 1, j - i - 1))));
      i = j;
    } else {
      size_t j = i;
      while (j < text.size() && !is_break(text[j])) ++j;
      out.push_back(Token::FromString(text.substr(i, j - i)));
      i = j;
    }
  }
  return out;
}

std::string JoinTokens(std::span<const Token> tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t.ToString();
  }
  return out;
}

std::vector<Token> Skeleton(std::span<const Token> tokens) {
  std::vector<Token> out;
  for (const auto& t : tokens) {
    if (!t.IsWord()) out.push_back(t);
  }
  return out;
}

MrNode MakeRelation(std::string label, std::vector<MrNode> children) {
  return MrNode{NodeKind::kRelation, std::move(label), {}, std::move(children)};
}

MrNode MakeAct(std::string label, std::vector<MrNode> children) {
  return MrNode{NodeKind::kAct, std::move(label), {}, std::move(children)};
}

MrNode MakeArgument(std::string label, std::string value) {
  return MrNode{NodeKind::kArgument, std::move(label), std::move(value), {}};
}

MrNode MakeArgument(std::string label, std::vector<MrNode> subfields) {
  return MrNode{NodeKind::kArgument, std::move(label), {}, std::move(subfields)};
}

MrTree MrTree::FromTopLevel(std::vector<MrNode> nodes) {
  if (nodes.empty()) throw EmptyInput("an MR needs at least one top-level node");
  if (nodes.size() == 1) return MrTree(std::move(nodes.front()));
  return MrTree(MakeRelation("JOIN", std::move(nodes)));
}

namespace {

size_t CountNodes(const MrNode& node) {
  size_t n = 1;
  for (const auto& c : node.children) n += CountNodes(c);
  return n;
}

void CollectWords(const AnnotatedNode& node, std::vector<std::string>* out) {
  for (size_t i = 0; i < node.spans.size(); ++i) {
    out->insert(out->end(), node.spans[i].begin(), node.spans[i].end());
    if (i < node.children.size()) CollectWords(node.children[i], out);
  }
}

std::vector<std::string> SplitWords(std::string_view value) {
  std::vector<std::string> out;
  std::istringstream in{std::string(value)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

std::string JoinWords(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

void EmitAnnotated(const AnnotatedNode& node, std::vector<Token>* out) {
  out->push_back(Token::Open(node.label));
  for (size_t i = 0; i < node.spans.size(); ++i) {
    for (const auto& w : node.spans[i]) out->push_back(Token::Word(w));
    if (i < node.children.size()) EmitAnnotated(node.children[i], out);
  }
  out->push_back(Token::Close());
}

AnnotatedNode MrToAnnotated(const MrNode& node) {
  AnnotatedNode out;
  out.kind = node.kind;
  out.label = node.label;
  for (const auto& c : node.children) {
    out.children.push_back(MrToAnnotated(c));
    out.spans.emplace_back();
  }
  if (node.IsLeaf()) out.spans.front() = SplitWords(node.value);
  return out;
}

MrNode AnnotatedToMr(const AnnotatedNode& node, bool strict) {
  MrNode out;
  out.kind = node.kind;
  out.label = node.label;
  bool leaf_argument = node.children.empty() && node.kind == NodeKind::kArgument;
  if (leaf_argument) {
    out.value = JoinWords(node.spans.front());
  } else if (strict) {
    for (const auto& span : node.spans) {
      if (!span.empty()) {
        throw InvalidTree("words '" + JoinWords(span) + "' inside non-leaf node " + node.label);
      }
    }
  }
  for (const auto& c : node.children) out.children.push_back(AnnotatedToMr(c, strict));
  return out;
}

template <typename Node>
void ValidateNode(const Node& node, const Ontology& ontology, const Node* parent) {
  auto info = ontology.Resolve(node.label);
  if (!info || info->canonical != node.label || info->kind != node.kind) {
    throw InvalidTree("label '" + node.label + "' is not a canonical " +
                      std::string(NodeKindName(node.kind)) + " of the ontology");
  }
  if (parent == nullptr) {
    if (node.kind == NodeKind::kArgument) throw InvalidTree("an argument cannot be the root");
  } else {
    switch (parent->kind) {
      case NodeKind::kRelation:
        if (node.kind == NodeKind::kArgument) {
          throw InvalidTree("argument " + node.label + " directly under relation " +
                            parent->label);
        }
        break;
      case NodeKind::kAct:
        if (node.kind != NodeKind::kArgument || !ontology.IsActArgument(node.label)) {
          throw InvalidTree(node.label + " is not a legal child of dialog act " + parent->label);
        }
        break;
      case NodeKind::kArgument:
        if (!ontology.IsSubfield(parent->label, node.label)) {
          throw InvalidTree(node.label + " is not a subfield of " + parent->label);
        }
        break;
    }
  }
  for (const auto& c : node.children) ValidateNode(c, ontology, &node);
}

}  // namespace

size_t MrTree::NodeCount() const { return CountNodes(root_); }

std::vector<std::string> AnnotatedNode::Words() const {
  std::vector<std::string> out;
  CollectWords(*this, &out);
  return out;
}

AnnotatedNode ParseLinearized(std::span<const Token> tokens, const Ontology& ontology) {
  if (!tokens.empty() && tokens.back().IsEos()) tokens = tokens.first(tokens.size() - 1);
  if (tokens.empty()) throw EmptyInput("no tokens to parse");

  std::vector<AnnotatedNode> top;
  std::vector<AnnotatedNode> stack;
  for (size_t i = 0; i < tokens.size(); ++i) {
    const Token& tok = tokens[i];
    switch (tok.type) {
      case Token::Type::kOpen: {
        auto info = ontology.Resolve(tok.text);
        if (!info) throw UnknownLabel("unknown label '" + tok.text + "'");
        AnnotatedNode node;
        node.kind = info->kind;
        node.label = info->canonical;
        stack.push_back(std::move(node));
        break;
      }
      case Token::Type::kClose: {
        if (stack.empty()) {
          throw UnbalancedBrackets("unmatched ']' at token " + std::to_string(i));
        }
        AnnotatedNode done = std::move(stack.back());
        stack.pop_back();
        if (stack.empty()) {
          top.push_back(std::move(done));
        } else {
          stack.back().children.push_back(std::move(done));
          stack.back().spans.emplace_back();
        }
        break;
      }
      case Token::Type::kWord:
        if (stack.empty()) {
          throw UnbalancedBrackets("word '" + tok.text + "' outside any bracket at token " +
                                   std::to_string(i));
        }
        stack.back().spans.back().push_back(tok.text);
        break;
      case Token::Type::kEos:
        throw UnbalancedBrackets("end-of-sequence before the last token");
    }
  }
  if (!stack.empty()) {
    throw UnbalancedBrackets(std::to_string(stack.size()) + " bracket(s) left open");
  }
  AnnotatedNode root;
  if (top.size() == 1) {
    root = std::move(top.front());
  } else {
    root.kind = NodeKind::kRelation;
    root.label = "JOIN";
    for (auto& n : top) {
      root.children.push_back(std::move(n));
      root.spans.emplace_back();
    }
  }
  Validate(root, ontology);
  return root;
}

AnnotatedNode ParseAnnotated(std::string_view text, const Ontology& ontology) {
  auto tokens = Tokenize(text);
  return ParseLinearized(tokens, ontology);
}

MrTree ParseMr(std::string_view text, const Ontology& ontology) {
  auto annotated = ParseAnnotated(text, ontology);
  return MrTree(AnnotatedToMr(annotated, /*strict=*/true));
}

std::vector<Token> Linearize(const AnnotatedNode& tree) {
  std::vector<Token> out;
  EmitAnnotated(tree, &out);
  return out;
}

std::vector<Token> Linearize(const MrTree& tree) { return Linearize(ToAnnotated(tree)); }

std::string ToString(const MrTree& tree) { return JoinTokens(Linearize(tree)); }
std::string ToString(const AnnotatedNode& tree) { return JoinTokens(Linearize(tree)); }

AnnotatedNode ToAnnotated(const MrTree& tree) { return MrToAnnotated(tree.root()); }

MrTree ToMr(const AnnotatedNode& tree) { return MrTree(AnnotatedToMr(tree, /*strict=*/false)); }

void Validate(const MrTree& tree, const Ontology& ontology) {
  ValidateNode<MrNode>(tree.root(), ontology, nullptr);
  // Non-leaf arguments carry no value.
  std::vector<const MrNode*> todo{&tree.root()};
  while (!todo.empty()) {
    const MrNode* n = todo.back();
    todo.pop_back();
    if (!n->IsLeaf() && !n->value.empty()) {
      throw InvalidTree("non-leaf node " + n->label + " has a value");
    }
    if (n->kind != NodeKind::kArgument && !n->value.empty()) {
      throw InvalidTree(n->label + " is not an argument but has a value");
    }
    for (const auto& c : n->children) todo.push_back(&c);
  }
}

void Validate(const AnnotatedNode& tree, const Ontology& ontology) {
  ValidateNode<AnnotatedNode>(tree, ontology, nullptr);
}

}  // namespace treemr
