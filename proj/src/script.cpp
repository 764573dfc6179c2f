#include "flowcast/script.hpp"

#include <cctype>
#include <set>
#include <unordered_map>

#include "flowcast/errors.hpp"

namespace flowcast {

namespace {

// Cursor over one logical line.
struct LineScanner {
    const std::string& s;
    int line;
    size_t pos = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ScriptSyntaxError(line, static_cast<int>(pos) + 1, msg);
    }

    void skip_ws() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    }

    bool at_end() {
        skip_ws();
        return pos >= s.size() || s[pos] == '#';
    }

    void expect(char c) {
        skip_ws();
        if (pos >= s.size() || s[pos] != c)
            fail(std::string("expected '") + c + "'");
        ++pos;
    }

    bool accept(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    std::string ident() {
        skip_ws();
        size_t start = pos;
        if (pos >= s.size() || !(std::isalpha(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
            fail("expected identifier");
        while (pos < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
            ++pos;
        return s.substr(start, pos - start);
    }

    void keyword(const std::string& kw) {
        size_t save = pos;
        std::string got = ident();
        if (got != kw) {
            pos = save;
            fail("expected '" + kw + "'");
        }
    }

    std::string string_literal() {
        expect('"');
        std::string out;
        while (pos < s.size() && s[pos] != '"') {
            if (s[pos] == '\\' && pos + 1 < s.size() &&
                (s[pos + 1] == '"' || s[pos + 1] == '\\'))
                ++pos;
            out += s[pos++];
        }
        if (pos >= s.size()) fail("unterminated string literal");
        ++pos;
        return out;
    }
};

} // namespace

WorkflowScript parse_script(const std::string& text) {
    WorkflowScript script;
    std::unordered_map<std::string, int> bound; // var -> statement index

    int line_no = 0;
    size_t start = 0;
    while (start <= text.size()) {
        size_t nl = text.find('\n', start);
        std::string line = text.substr(start, nl == std::string::npos ? std::string::npos
                                                                      : nl - start);
        start = nl == std::string::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        LineScanner sc{line, line_no};
        if (sc.at_end()) continue;

        ScriptStatement st;
        st.line = line_no;
        st.var = sc.ident();
        if (st.var == "task")
            sc.fail("'task' is reserved and cannot be bound");
        sc.expect('=');
        sc.keyword("agent");
        sc.expect('(');
        st.agent_name = sc.string_literal();
        sc.expect(',');
        sc.keyword("instruction");
        sc.expect('=');
        st.instruction = sc.string_literal();
        sc.expect(')');
        sc.expect('(');
        if (!sc.accept(')')) {
            do {
                std::string arg = sc.ident();
                if (arg != "task" && !bound.count(arg))
                    throw UnboundVariableError(line_no, arg);
                st.args.push_back(std::move(arg));
            } while (sc.accept(','));
            sc.expect(')');
        }
        if (!sc.at_end()) sc.fail("trailing characters after statement");

        if (bound.count(st.var))
            sc.fail("variable '" + st.var + "' rebound (single-assignment)");
        bound[st.var] = static_cast<int>(script.statements.size());
        script.statements.push_back(std::move(st));
    }

    if (script.statements.empty())
        throw ScriptSyntaxError(1, 1, "script has no statements");
    return script;
}

WorkflowGraph extract_graph(const WorkflowScript& script) {
    WorkflowGraph g;
    std::unordered_map<std::string, int> producer; // var -> node id
    std::set<std::pair<int, int>> edge_set;

    for (size_t i = 0; i < script.statements.size(); ++i) {
        const ScriptStatement& st = script.statements[i];
        int id = static_cast<int>(i) + 1;
        g.nodes.push_back({id, st.agent_name + " " + st.instruction});
        for (const std::string& arg : st.args) {
            if (arg == "task") continue;
            int src = producer.at(arg);
            if (edge_set.insert({src, id}).second) g.edges.emplace_back(src, id);
        }
        producer[st.var] = id;
    }
    return g;
}

} // namespace flowcast
