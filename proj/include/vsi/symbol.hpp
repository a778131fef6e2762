#pragma once

#include <cctype>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "vsi/errors.hpp"

namespace vsi {

enum class SymbolKind {
  Coordinate,  ///< differentiation allowed
  Parameter,   ///< constant: every derivative is zero
};

/// A named indeterminate.  Symbols live inside a VariableContext and are
/// identified by their position in it.
struct Symbol {
  std::string name;
  SymbolKind kind = SymbolKind::Parameter;
};

inline bool is_valid_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

/// Ordered list of coordinates and parameters shared by all expressions and
/// tensors of one geometry.  The signature is (k, k+m): 2k null directions
/// plus m spacelike ones, so the manifold dimension is 2k + m.
class VariableContext {
 public:
  VariableContext(std::vector<Symbol> symbols, int k, int m)
      : symbols_(std::move(symbols)), k_(k), m_(m) {
    if (k < 0 || m < 0) throw ValidationError("signature counts must be non-negative");
    int n_coords = 0;
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      const Symbol& s = symbols_[i];
      if (!is_valid_identifier(s.name))
        throw ValidationError("invalid symbol name '" + s.name + "'");
      if (index_.count(s.name))
        throw ValidationError("duplicate symbol name '" + s.name + "'");
      index_[s.name] = i;
      if (s.kind == SymbolKind::Coordinate) ++n_coords;
    }
    if (n_coords != dimension())
      throw ValidationError("expected " + std::to_string(dimension()) +
                            " coordinates for signature (" + std::to_string(k) + "," +
                            std::to_string(k + m) + "), got " + std::to_string(n_coords));
  }

  int k() const { return k_; }
  int m() const { return m_; }
  int dimension() const { return 2 * k_ + m_; }

  std::size_t size() const { return symbols_.size(); }
  const Symbol& symbol(std::size_t i) const { return symbols_.at(i); }
  const std::vector<Symbol>& symbols() const { return symbols_; }

  bool has(const std::string& name) const { return index_.count(name) != 0; }
  std::size_t index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw ValidationError("unknown symbol '" + name + "'");
    return it->second;
  }

  /// Coordinate symbols in declaration order; their context indices.
  std::vector<std::size_t> coordinate_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < symbols_.size(); ++i)
      if (symbols_[i].kind == SymbolKind::Coordinate) out.push_back(i);
    return out;
  }

  bool operator==(const VariableContext& o) const {
    if (k_ != o.k_ || m_ != o.m_ || symbols_.size() != o.symbols_.size()) return false;
    for (std::size_t i = 0; i < symbols_.size(); ++i)
      if (symbols_[i].name != o.symbols_[i].name || symbols_[i].kind != o.symbols_[i].kind)
        return false;
    return true;
  }

 private:
  std::vector<Symbol> symbols_;
  int k_ = 0, m_ = 0;
  std::map<std::string, std::size_t> index_;
};

using ContextPtr = std::shared_ptr<const VariableContext>;

/// Convenience builder: coordinate names first, then parameter names.
inline ContextPtr make_context(const std::vector<std::string>& coordinates,
                               const std::vector<std::string>& parameters, int k, int m) {
  std::vector<Symbol> syms;
  syms.reserve(coordinates.size() + parameters.size());
  for (const auto& c : coordinates) syms.push_back({c, SymbolKind::Coordinate});
  for (const auto& p : parameters) syms.push_back({p, SymbolKind::Parameter});
  return std::make_shared<VariableContext>(std::move(syms), k, m);
}

/// Two expressions may be combined only when their contexts agree.
inline void require_same_context(const ContextPtr& a, const ContextPtr& b) {
  if (a == b) return;
  if (a && b && *a == *b) return;
  throw ValidationError("operands belong to different variable contexts");
}

}  // namespace vsi
