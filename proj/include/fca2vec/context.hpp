#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fca2vec/bitset.hpp"

namespace fca2vec {

// A formal context: objects x attributes with a binary incidence relation.
// Rows are object-major bit vectors of width |M|; the column-major mirror is
// kept alongside so both derivation directions are intersections.
// Immutable after construction; use the factory functions below.
class FormalContext {
public:
    FormalContext() = default;

    int object_count() const { return static_cast<int>(objects_.size()); }
    int attribute_count() const { return static_cast<int>(attributes_.size()); }

    const std::vector<std::string>& objects() const { return objects_; }
    const std::vector<std::string>& attributes() const { return attributes_; }

    const std::string& object_name(int g) const { return objects_.at(g); }
    const std::string& attribute_name(int m) const { return attributes_.at(m); }

    // Attributes of object g (width |M|).
    const AttrSet& row(int g) const { return rows_.at(g); }
    // Objects of attribute m (width |G|).
    const ObjSet& col(int m) const { return cols_.at(m); }

    bool incident(int g, int m) const { return rows_.at(g).test(m); }

    long long incidence_count() const {
        long long c = 0;
        for (const auto& r : rows_) c += r.count();
        return c;
    }

    double density() const {
        long long cells = static_cast<long long>(object_count()) * attribute_count();
        return cells == 0 ? 0.0 : static_cast<double>(incidence_count()) / cells;
    }

    bool has_years() const { return !attribute_year_.empty(); }
    int attribute_year(int m) const { return attribute_year_.at(m); }
    const std::vector<int>& attribute_years() const { return attribute_year_; }

    int object_index(const std::string& name) const;     // -1 when absent
    int attribute_index(const std::string& name) const;  // -1 when absent

    friend FormalContext make_context(std::vector<std::string> objects,
                                      std::vector<std::string> attributes,
                                      std::vector<AttrSet> rows);
    friend FormalContext with_years(FormalContext ctx, std::vector<int> years);

private:
    std::vector<std::string> objects_;
    std::vector<std::string> attributes_;
    std::vector<AttrSet> rows_;
    std::vector<ObjSet> cols_;
    std::vector<int> attribute_year_;  // empty unless a year sidecar was attached
};

struct ContextError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Validation policy for objects without attributes / attributes without
// objects. The default rejects them; Drop prunes them instead.
enum class EmptyPolicy { Reject, Drop, Allow };

struct DropStats {
    int objects_dropped = 0;
    int attributes_dropped = 0;
};

// Builds a context without the empty-row/column check (names and shapes are
// still validated).
FormalContext make_context(std::vector<std::string> objects,
                           std::vector<std::string> attributes,
                           std::vector<AttrSet> rows);

// Builds a context and applies `policy` to empty rows/columns.
FormalContext make_context(std::vector<std::string> objects,
                           std::vector<std::string> attributes,
                           std::vector<AttrSet> rows, EmptyPolicy policy,
                           DropStats* stats = nullptr);

// Derivation operators. A' = attributes common to all objects of A, and dually.
AttrSet derive_attrs(const FormalContext& ctx, const ObjSet& objs);
ObjSet derive_objs(const FormalContext& ctx, const AttrSet& attrs);

// B'' -- the closure of an attribute set.
AttrSet closure_attrs(const FormalContext& ctx, const AttrSet& attrs);

// Closure Hamming distance: Hamming distance between the binary encodings of
// A'' and B''. Zero for distinct sets with equal closure, so not a metric.
int chd(const FormalContext& ctx, const AttrSet& a, const AttrSet& b);

// Transposed context: objects and attributes swap roles.
FormalContext dualize(const FormalContext& ctx);

// Restriction to a subset of objects and attributes (order preserved).
FormalContext restrict_context(const FormalContext& ctx, const ObjSet& objs,
                               const AttrSet& attrs);

// ---------------------------------------------------------------------------
// Nominal tables and scaling

struct NominalTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;  // rectangular
};

enum class MissingPolicy { NoAttribute, AsValue };

inline constexpr const char* kMissingToken = "?";

// One binary attribute per (column, distinct value) pair, named
// "column=value"; values ordered by first appearance per column. Under
// MissingPolicy::NoAttribute the token "?" yields no incidence; under AsValue
// it is scaled like any other value.
FormalContext scale_nominal(const NominalTable& table,
                            MissingPolicy missing = MissingPolicy::NoAttribute,
                            EmptyPolicy policy = EmptyPolicy::Reject,
                            DropStats* stats = nullptr);

// Comma-separated values with a header row. No quoting; CR stripped.
NominalTable load_csv(const std::string& path);

// ---------------------------------------------------------------------------
// File formats

struct ParseError : std::runtime_error {
    ParseError(const std::string& path, int line, const std::string& what);
    int line;
};

// Burmeister .cxt: "B", optional name line, |G|, |M|, blank line, object
// names, attribute names, |G| rows of 'X'/'.'.
FormalContext load_burmeister(const std::string& path,
                              EmptyPolicy policy = EmptyPolicy::Reject,
                              DropStats* stats = nullptr);
void save_burmeister(const FormalContext& ctx, const std::string& path);

// TSV sidecar "attribute_name<TAB>year"; every context attribute must appear.
FormalContext attach_years_from_tsv(const FormalContext& ctx, const std::string& path);

// Stable 64-bit digest of names plus incidence, as 16 hex digits.
std::string context_hash(const FormalContext& ctx);

}  // namespace fca2vec
