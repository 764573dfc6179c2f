#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "flowcast/errors.hpp"
#include "flowcast/graph.hpp"
#include "flowcast/script.hpp"

using namespace flowcast;

TEST_CASE("two-statement script becomes a two-node chain") {
    const std::string src =
        "draft = agent(\"coder\", instruction=\"write the function\")(task)\n"
        "review = agent(\"reviewer\", instruction=\"review the draft\")(draft)\n";
    WorkflowScript script = parse_script(src);
    REQUIRE(script.statements.size() == 2);
    CHECK(script.statements[0].var == "draft");
    CHECK(script.statements[0].agent_name == "coder");
    CHECK(script.statements[0].args == std::vector<std::string>{"task"});
    CHECK(script.statements[1].args == std::vector<std::string>{"draft"});

    WorkflowGraph g = extract_graph(script);
    REQUIRE(g.node_count() == 2);
    CHECK(g.nodes[0].id == 1);
    CHECK(g.nodes[1].id == 2);
    CHECK(g.nodes[0].prompt == "coder write the function");
    CHECK(g.nodes[1].prompt == "reviewer review the draft");
    REQUIRE(g.edges.size() == 1);
    CHECK(g.edges[0] == std::pair<int, int>{1, 2});
    CHECK(validate(g).ok());
}

TEST_CASE("comments, blank lines, and spacing are tolerated") {
    const std::string src =
        "# pipeline\n"
        "\n"
        "  a   =  agent( \"planner\" ,  instruction = \"plan\" ) ( task )  # end\n";
    WorkflowScript script = parse_script(src);
    REQUIRE(script.statements.size() == 1);
    CHECK(script.statements[0].agent_name == "planner");
    CHECK(script.statements[0].instruction == "plan");
}

TEST_CASE("fan-in: multiple args become multiple incoming edges") {
    const std::string src =
        "a = agent(\"x\", instruction=\"one\")(task)\n"
        "b = agent(\"y\", instruction=\"two\")(task)\n"
        "c = agent(\"z\", instruction=\"merge\")(a, b)\n";
    WorkflowGraph g = extract_graph(parse_script(src));
    REQUIRE(g.edges.size() == 2);
    CHECK(g.edges[0] == std::pair<int, int>{1, 3});
    CHECK(g.edges[1] == std::pair<int, int>{2, 3});
}

TEST_CASE("repeated consumption of one variable collapses to a single edge") {
    const std::string src =
        "a = agent(\"x\", instruction=\"one\")(task)\n"
        "b = agent(\"y\", instruction=\"two\")(a, a, a)\n";
    WorkflowGraph g = extract_graph(parse_script(src));
    CHECK(g.edges.size() == 1);
}

TEST_CASE("task arguments create no edges") {
    const std::string src = "only = agent(\"solo\", instruction=\"go\")(task, task)\n";
    WorkflowGraph g = extract_graph(parse_script(src));
    CHECK(g.node_count() == 1);
    CHECK(g.edges.empty());
}

TEST_CASE("escape sequences inside string literals") {
    const std::string src =
        "a = agent(\"quoter\", instruction=\"say \\\"hi\\\" and \\\\ more\")(task)\n";
    WorkflowScript script = parse_script(src);
    CHECK(script.statements[0].instruction == "say \"hi\" and \\ more");
}

TEST_CASE("syntax errors carry the line number") {
    try {
        parse_script("a = agent(\"x\", instruction=\"ok\")(task)\nb = agent(broken\n");
        FAIL("expected a syntax error");
    } catch (const ScriptSyntaxError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("unbound variable is rejected with its line") {
    try {
        parse_script("a = agent(\"x\", instruction=\"ok\")(ghost)\n");
        FAIL("expected an unbound-variable error");
    } catch (const UnboundVariableError& e) {
        CHECK(e.var() == "ghost");
        CHECK(std::string(e.what()).find("line 1") != std::string::npos);
    }
}

TEST_CASE("use before definition is rejected even if defined later") {
    const std::string src =
        "a = agent(\"x\", instruction=\"ok\")(b)\n"
        "b = agent(\"y\", instruction=\"late\")(task)\n";
    CHECK_THROWS_AS(parse_script(src), UnboundVariableError);
}

TEST_CASE("rebinding a variable is rejected") {
    const std::string src =
        "a = agent(\"x\", instruction=\"one\")(task)\n"
        "a = agent(\"y\", instruction=\"two\")(task)\n";
    CHECK_THROWS_AS(parse_script(src), ScriptSyntaxError);
}

TEST_CASE("binding the name task is rejected") {
    CHECK_THROWS_AS(parse_script("task = agent(\"x\", instruction=\"no\")(task)\n"),
                    ScriptSyntaxError);
}

TEST_CASE("empty script is rejected") {
    CHECK_THROWS_AS(parse_script("# nothing here\n\n"), ScriptSyntaxError);
}

TEST_CASE("trailing garbage is rejected") {
    CHECK_THROWS_AS(parse_script("a = agent(\"x\", instruction=\"ok\")(task) extra\n"),
                    ScriptSyntaxError);
}

TEST_CASE("unterminated string literal is rejected") {
    CHECK_THROWS_AS(parse_script("a = agent(\"x, instruction=\"ok\")(task)\n"),
                    ScriptSyntaxError);
}
