#include "cobp/examples/program.hpp"

namespace cobp::examples {

QueryFn table_query(std::string table, RowPredicate keep) {
  return [table = std::move(table), keep = std::move(keep)](const ContextStore& ctx, const Value& params) {
    std::vector<QueryResult> out;
    for (const auto& [key, row] : ctx.rows(table)) {
      if (!keep || keep(row, ctx, params)) out.push_back({key, row});
    }
    return out;
  };
}

QueryFn constant_query() {
  return [](const ContextStore&, const Value&) { return std::vector<QueryResult>{{"1", Value(1)}}; };
}

}  // namespace cobp::examples
