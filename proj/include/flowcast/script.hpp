#pragma once

#include <string>
#include <vector>

#include "flowcast/graph.hpp"

namespace flowcast {

// One statement of the workflow script grammar:
//   <var> = agent("<name>", instruction="<text>")(<arg>, <arg>, ...)
// where each arg is `task` or a previously bound variable.
struct ScriptStatement {
    std::string var;
    std::string agent_name;
    std::string instruction;
    std::vector<std::string> args; // "task" or variable names
    int line = 0;
};

struct WorkflowScript {
    std::vector<ScriptStatement> statements;
};

// Whitespace-insensitive line-oriented parser; `#` starts a comment.
// Throws ScriptSyntaxError (with line/column) or UnboundVariableError.
WorkflowScript parse_script(const std::string& text);

// One node per statement (ids 1..n in statement order), prompt = agent
// name + " " + instruction. Edge (i,j) iff statement j consumes the var
// bound by statement i; `task` args create no edge; repeated consumption
// of one var collapses to a single edge.
WorkflowGraph extract_graph(const WorkflowScript& script);

} // namespace flowcast
