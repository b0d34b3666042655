/*!
 * \file treemr/mr_tree.h
 * \brief Tree-structured meaning representations, annotated responses and their
 *  linearized token format (`[LABEL` ... `]`).
 */
#ifndef TREEMR_MR_TREE_H_
#define TREEMR_MR_TREE_H_

#include <treemr/ontology.h>

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace treemr {

/*! \brief One item of a linearized tree. */
struct Token {
  enum class Type : uint8_t { kOpen, kClose, kWord, kEos };

  Type type = Type::kWord;
  /*! \brief The label for kOpen, the word for kWord, empty otherwise. */
  std::string text;

  static Token Open(std::string label) { return {Type::kOpen, std::move(label)}; }
  static Token Close() { return {Type::kClose, {}}; }
  static Token Word(std::string word) { return {Type::kWord, std::move(word)}; }
  static Token Eos() { return {Type::kEos, {}}; }

  bool IsOpen() const { return type == Type::kOpen; }
  bool IsClose() const { return type == Type::kClose; }
  bool IsWord() const { return type == Type::kWord; }
  bool IsEos() const { return type == Type::kEos; }

  /*! \brief Vocabulary form: `[LABEL`, `]`, the word itself, or `</s>`. */
  std::string ToString() const;
  /*! \brief Inverse of ToString() for a single whitespace-free item. */
  static Token FromString(std::string_view s);

  friend bool operator==(const Token&, const Token&) = default;
  friend auto operator<=>(const Token&, const Token&) = default;
};

inline constexpr std::string_view kEosString = "</s>";
inline constexpr std::string_view kCloseString = "]";

/*!
 * \brief Splits text into tokens. `[` opens a label that runs to the next space or
 *  bracket, `]` is always its own token, `</s>` is end-of-sequence. Words never
 *  contain brackets.
 */
std::vector<Token> Tokenize(std::string_view text);
std::string JoinTokens(std::span<const Token> tokens);
/*! \brief Open/Close/Eos tokens only. */
std::vector<Token> Skeleton(std::span<const Token> tokens);

struct MrNode {
  NodeKind kind = NodeKind::kArgument;
  std::string label;
  /*! \brief Terminal value; only leaf arguments carry one (possibly empty). */
  std::string value;
  std::vector<MrNode> children;

  bool IsLeaf() const { return children.empty(); }
  friend bool operator==(const MrNode&, const MrNode&) = default;
};

MrNode MakeRelation(std::string label, std::vector<MrNode> children);
MrNode MakeAct(std::string label, std::vector<MrNode> children);
MrNode MakeArgument(std::string label, std::string value);
MrNode MakeArgument(std::string label, std::vector<MrNode> subfields);

/*!
 * \brief A single-rooted meaning representation. Several top-level nodes are
 *  wrapped in a synthetic JOIN.
 */
class MrTree {
 public:
  explicit MrTree(MrNode root) : root_(std::move(root)) {}
  static MrTree FromTopLevel(std::vector<MrNode> nodes);

  const MrNode& root() const { return root_; }
  size_t NodeCount() const;

  friend bool operator==(const MrTree&, const MrTree&) = default;

 private:
  MrNode root_;
};

/*!
 * \brief A node of an annotated response: same shape as an MR node, with word
 *  spans interleaved around the children. `spans[i]` precedes `children[i]` and
 *  `spans.back()` trails the last child, so `spans.size() == children.size() + 1`.
 */
struct AnnotatedNode {
  NodeKind kind = NodeKind::kArgument;
  std::string label;
  std::vector<AnnotatedNode> children;
  std::vector<std::vector<std::string>> spans{{}};

  /*! \brief All words in surface order. */
  std::vector<std::string> Words() const;
  friend bool operator==(const AnnotatedNode&, const AnnotatedNode&) = default;
};

/*!
 * \brief Parses a token sequence (optionally terminated by Eos) into an annotated
 *  tree. Labels are resolved against the ontology; several top-level nodes are
 *  wrapped in JOIN.
 * \throws EmptyInput, UnbalancedBrackets, UnknownLabel, InvalidTree
 */
AnnotatedNode ParseLinearized(std::span<const Token> tokens, const Ontology& ontology);
AnnotatedNode ParseAnnotated(std::string_view text, const Ontology& ontology);
/*! \brief Parses an MR string; words are only allowed inside leaf arguments. */
MrTree ParseMr(std::string_view text, const Ontology& ontology);

std::vector<Token> Linearize(const MrTree& tree);
std::vector<Token> Linearize(const AnnotatedNode& tree);
std::string ToString(const MrTree& tree);
std::string ToString(const AnnotatedNode& tree);

/*! \brief Leaf values become the word span of their node. */
AnnotatedNode ToAnnotated(const MrTree& tree);
/*! \brief Drops words outside leaf arguments; a leaf's words become its value. */
MrTree ToMr(const AnnotatedNode& tree);

/*! \brief Throws InvalidTree unless the tree obeys the ontology's nesting rules. */
void Validate(const MrTree& tree, const Ontology& ontology);
void Validate(const AnnotatedNode& tree, const Ontology& ontology);

}  // namespace treemr

#endif  // TREEMR_MR_TREE_H_
