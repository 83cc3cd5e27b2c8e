#include "fca2vec/context.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace fca2vec {

namespace {

void check_attr_width(const FormalContext& ctx, const Bitset& s, const char* op) {
    if (s.width() != ctx.attribute_count())
        throw std::invalid_argument(std::string(op) + ": attribute set width " +
                                    std::to_string(s.width()) + " does not match |M| = " +
                                    std::to_string(ctx.attribute_count()));
}

void check_obj_width(const FormalContext& ctx, const Bitset& s, const char* op) {
    if (s.width() != ctx.object_count())
        throw std::invalid_argument(std::string(op) + ": object set width " +
                                    std::to_string(s.width()) + " does not match |G| = " +
                                    std::to_string(ctx.object_count()));
}

std::vector<ObjSet> build_columns(int n_objects, int n_attributes,
                                  const std::vector<AttrSet>& rows) {
    std::vector<ObjSet> cols(n_attributes, ObjSet(n_objects));
    for (int g = 0; g < n_objects; ++g)
        rows[g].for_each_set([&](int m) { cols[m].set(g); });
    return cols;
}

void check_unique(const std::vector<std::string>& names, const char* kind) {
    std::unordered_set<std::string> seen;
    for (const auto& n : names)
        if (!seen.insert(n).second)
            throw ContextError(std::string("duplicate ") + kind + " name: " + n);
}

}  // namespace

int FormalContext::object_index(const std::string& name) const {
    auto it = std::find(objects_.begin(), objects_.end(), name);
    return it == objects_.end() ? -1 : static_cast<int>(it - objects_.begin());
}

int FormalContext::attribute_index(const std::string& name) const {
    auto it = std::find(attributes_.begin(), attributes_.end(), name);
    return it == attributes_.end() ? -1 : static_cast<int>(it - attributes_.begin());
}

FormalContext make_context(std::vector<std::string> objects,
                           std::vector<std::string> attributes,
                           std::vector<AttrSet> rows) {
    if (rows.size() != objects.size())
        throw ContextError("row count " + std::to_string(rows.size()) +
                           " does not match object count " + std::to_string(objects.size()));
    for (const auto& r : rows)
        if (r.width() != static_cast<int>(attributes.size()))
            throw ContextError("row width " + std::to_string(r.width()) +
                               " does not match attribute count " +
                               std::to_string(attributes.size()));
    check_unique(objects, "object");
    check_unique(attributes, "attribute");

    FormalContext ctx;
    ctx.objects_ = std::move(objects);
    ctx.attributes_ = std::move(attributes);
    ctx.rows_ = std::move(rows);
    ctx.cols_ = build_columns(ctx.object_count(), ctx.attribute_count(), ctx.rows_);
    return ctx;
}

FormalContext make_context(std::vector<std::string> objects,
                           std::vector<std::string> attributes,
                           std::vector<AttrSet> rows, EmptyPolicy policy, DropStats* stats) {
    FormalContext ctx = make_context(std::move(objects), std::move(attributes), std::move(rows));
    if (policy == EmptyPolicy::Allow) return ctx;

    ObjSet keep_objs = ObjSet(ctx.object_count());
    AttrSet keep_attrs = AttrSet(ctx.attribute_count());
    for (int g = 0; g < ctx.object_count(); ++g)
        if (ctx.row(g).any()) keep_objs.set(g);
    for (int m = 0; m < ctx.attribute_count(); ++m)
        if (ctx.col(m).any()) keep_attrs.set(m);

    int bad_objs = ctx.object_count() - keep_objs.count();
    int bad_attrs = ctx.attribute_count() - keep_attrs.count();
    if (bad_objs == 0 && bad_attrs == 0) return ctx;

    if (policy == EmptyPolicy::Reject) {
        std::string what = "context violates the standing assumption:";
        if (bad_objs) what += " " + std::to_string(bad_objs) + " object(s) without attributes";
        if (bad_attrs) what += " " + std::to_string(bad_attrs) + " attribute(s) without objects";
        throw ContextError(what);
    }
    if (stats) {
        stats->objects_dropped = bad_objs;
        stats->attributes_dropped = bad_attrs;
    }
    return restrict_context(ctx, keep_objs, keep_attrs);
}

FormalContext with_years(FormalContext ctx, std::vector<int> years) {
    if (years.size() != ctx.attributes_.size())
        throw ContextError("year vector length does not match attribute count");
    ctx.attribute_year_ = std::move(years);
    return ctx;
}

AttrSet derive_attrs(const FormalContext& ctx, const ObjSet& objs) {
    check_obj_width(ctx, objs, "derive_attrs");
    AttrSet result = AttrSet::full(ctx.attribute_count());
    objs.for_each_set([&](int g) { result &= ctx.row(g); });
    return result;
}

ObjSet derive_objs(const FormalContext& ctx, const AttrSet& attrs) {
    check_attr_width(ctx, attrs, "derive_objs");
    ObjSet result = ObjSet::full(ctx.object_count());
    attrs.for_each_set([&](int m) { result &= ctx.col(m); });
    return result;
}

AttrSet closure_attrs(const FormalContext& ctx, const AttrSet& attrs) {
    return derive_attrs(ctx, derive_objs(ctx, attrs));
}

int chd(const FormalContext& ctx, const AttrSet& a, const AttrSet& b) {
    return closure_attrs(ctx, a).hamming(closure_attrs(ctx, b));
}

FormalContext dualize(const FormalContext& ctx) {
    FormalContext dual;
    std::vector<AttrSet> rows(ctx.attribute_count());
    for (int m = 0; m < ctx.attribute_count(); ++m) rows[m] = ctx.col(m);
    return make_context(ctx.attributes(), ctx.objects(), std::move(rows));
}

FormalContext restrict_context(const FormalContext& ctx, const ObjSet& objs,
                               const AttrSet& attrs) {
    check_obj_width(ctx, objs, "restrict_context");
    check_attr_width(ctx, attrs, "restrict_context");

    std::vector<int> attr_idx = attrs.to_indices();
    std::vector<std::string> new_attrs;
    new_attrs.reserve(attr_idx.size());
    for (int m : attr_idx) new_attrs.push_back(ctx.attribute_name(m));

    std::vector<std::string> new_objs;
    std::vector<AttrSet> new_rows;
    objs.for_each_set([&](int g) {
        new_objs.push_back(ctx.object_name(g));
        AttrSet r(static_cast<int>(attr_idx.size()));
        for (std::size_t j = 0; j < attr_idx.size(); ++j)
            if (ctx.row(g).test(attr_idx[j])) r.set(static_cast<int>(j));
        new_rows.push_back(std::move(r));
    });

    FormalContext out = make_context(std::move(new_objs), std::move(new_attrs), std::move(new_rows));
    if (ctx.has_years()) {
        std::vector<int> years;
        years.reserve(attr_idx.size());
        for (int m : attr_idx) years.push_back(ctx.attribute_year(m));
        out = with_years(std::move(out), std::move(years));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Nominal scaling

FormalContext scale_nominal(const NominalTable& table, MissingPolicy missing,
                            EmptyPolicy policy, DropStats* stats) {
    if (table.columns.empty() || table.rows.empty())
        throw ContextError("scale_nominal: empty table");
    for (const auto& r : table.rows)
        if (r.size() != table.columns.size())
            throw ContextError("scale_nominal: ragged row (expected " +
                               std::to_string(table.columns.size()) + " cells, got " +
                               std::to_string(r.size()) + ")");
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        bool all_missing = true;
        for (const auto& r : table.rows)
            if (r[c] != kMissingToken) { all_missing = false; break; }
        if (all_missing && missing == MissingPolicy::NoAttribute)
            throw ContextError("scale_nominal: column '" + table.columns[c] +
                               "' has no observed values");
    }

    // Attribute per (column, value), values in first-appearance order.
    std::vector<std::string> attr_names;
    std::vector<std::unordered_map<std::string, int>> value_attr(table.columns.size());
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        for (const auto& r : table.rows) {
            const std::string& v = r[c];
            if (v == kMissingToken && missing == MissingPolicy::NoAttribute) continue;
            if (value_attr[c].emplace(v, static_cast<int>(attr_names.size())).second)
                attr_names.push_back(table.columns[c] + "=" + v);
        }
    }

    int n_attrs = static_cast<int>(attr_names.size());
    std::vector<std::string> obj_names;
    std::vector<AttrSet> rows;
    obj_names.reserve(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        obj_names.push_back(std::to_string(i));
        AttrSet r(n_attrs);
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            auto it = value_attr[c].find(table.rows[i][c]);
            if (it != value_attr[c].end()) r.set(it->second);
        }
        rows.push_back(std::move(r));
    }
    return make_context(std::move(obj_names), std::move(attr_names), std::move(rows), policy,
                        stats);
}

NominalTable load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file");
    NominalTable t;
    std::string line;
    int lineno = 0;
    auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::string cur;
        for (char ch : s) {
            if (ch == ',') {
                cells.push_back(cur);
                cur.clear();
            } else if (ch != '\r') {
                cur.push_back(ch);
            }
        }
        cells.push_back(cur);
        return cells;
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto cells = split(line);
        if (t.columns.empty()) {
            t.columns = std::move(cells);
        } else {
            if (cells.size() != t.columns.size())
                throw ParseError(path, lineno,
                                 "expected " + std::to_string(t.columns.size()) + " cells, got " +
                                     std::to_string(cells.size()));
            t.rows.push_back(std::move(cells));
        }
    }
    if (t.columns.empty()) throw ParseError(path, lineno, "missing header row");
    return t;
}

// ---------------------------------------------------------------------------
// Burmeister format

ParseError::ParseError(const std::string& path, int line_, const std::string& what)
    : std::runtime_error(path + ":" + std::to_string(line_) + ": " + what), line(line_) {}

namespace {

bool parse_count(const std::string& s, int& out) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    try {
        out = std::stoi(s);
    } catch (const std::exception&) {
        return false;
    }
    return true;
}

std::string chomp(std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == '\n')) s.pop_back();
    return s;
}

}  // namespace

FormalContext load_burmeister(const std::string& path, EmptyPolicy policy, DropStats* stats) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file");

    int lineno = 0;
    std::string line;
    auto next_line = [&](const char* what) {
        if (!std::getline(in, line)) throw ParseError(path, lineno + 1, std::string("unexpected end of file, expected ") + what);
        ++lineno;
        line = chomp(line);
    };

    next_line("format tag 'B'");
    if (line != "B") throw ParseError(path, lineno, "expected format tag 'B', got '" + line + "'");

    // Optional name line: absent when the counts follow immediately.
    next_line("context name or object count");
    int n_objects = -1, n_attributes = -1;
    if (!parse_count(line, n_objects)) {
        next_line("object count");
        if (!parse_count(line, n_objects))
            throw ParseError(path, lineno, "expected object count, got '" + line + "'");
    }
    next_line("attribute count");
    if (!parse_count(line, n_attributes))
        throw ParseError(path, lineno, "expected attribute count, got '" + line + "'");
    next_line("blank separator line");
    if (!line.empty()) throw ParseError(path, lineno, "expected blank line before names");

    std::vector<std::string> objects(n_objects), attributes(n_attributes);
    for (int g = 0; g < n_objects; ++g) {
        next_line("object name");
        objects[g] = line;
    }
    for (int m = 0; m < n_attributes; ++m) {
        next_line("attribute name");
        attributes[m] = line;
    }

    std::vector<AttrSet> rows;
    rows.reserve(n_objects);
    for (int g = 0; g < n_objects; ++g) {
        next_line("incidence row");
        if (static_cast<int>(line.size()) != n_attributes)
            throw ParseError(path, lineno,
                             "incidence row has " + std::to_string(line.size()) +
                                 " characters, expected " + std::to_string(n_attributes));
        AttrSet r(n_attributes);
        for (int m = 0; m < n_attributes; ++m) {
            if (line[m] == 'X')
                r.set(m);
            else if (line[m] != '.')
                throw ParseError(path, lineno,
                                 std::string("invalid incidence character '") + line[m] +
                                     "' (expected 'X' or '.')");
        }
        rows.push_back(std::move(r));
    }
    return make_context(std::move(objects), std::move(attributes), std::move(rows), policy, stats);
}

void save_burmeister(const FormalContext& ctx, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "B\n\n" << ctx.object_count() << "\n" << ctx.attribute_count() << "\n\n";
    for (const auto& g : ctx.objects()) out << g << "\n";
    for (const auto& m : ctx.attributes()) out << m << "\n";
    for (int g = 0; g < ctx.object_count(); ++g) {
        for (int m = 0; m < ctx.attribute_count(); ++m) out << (ctx.incident(g, m) ? 'X' : '.');
        out << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

FormalContext attach_years_from_tsv(const FormalContext& ctx, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file");
    std::unordered_map<std::string, int> year_of;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = chomp(line);
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw ParseError(path, lineno, "expected 'attribute_name<TAB>year'");
        std::string name = line.substr(0, tab);
        int year;
        if (!parse_count(line.substr(tab + 1), year))
            throw ParseError(path, lineno, "invalid year '" + line.substr(tab + 1) + "'");
        year_of[name] = year;
    }
    std::vector<int> years;
    years.reserve(ctx.attribute_count());
    for (const auto& name : ctx.attributes()) {
        auto it = year_of.find(name);
        if (it == year_of.end())
            throw ContextError("year sidecar " + path + " is missing attribute '" + name + "'");
        years.push_back(it->second);
    }
    return with_years(ctx, std::move(years));
}

std::string context_hash(const FormalContext& ctx) {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64
    auto mix_byte = [&](unsigned char b) {
        h ^= b;
        h *= 1099511628211ull;
    };
    auto mix_str = [&](const std::string& s) {
        for (unsigned char c : s) mix_byte(c);
        mix_byte(0);
    };
    auto mix_u64 = [&](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) mix_byte(static_cast<unsigned char>(v >> (8 * i)));
    };
    mix_u64(static_cast<std::uint64_t>(ctx.object_count()));
    mix_u64(static_cast<std::uint64_t>(ctx.attribute_count()));
    for (const auto& s : ctx.objects()) mix_str(s);
    for (const auto& s : ctx.attributes()) mix_str(s);
    for (int g = 0; g < ctx.object_count(); ++g)
        for (std::uint64_t w : ctx.row(g).words()) mix_u64(w);
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 0; i < 16; ++i) out[15 - i] = digits[(h >> (4 * i)) & 0xf];
    return out;
}

}  // namespace fca2vec
