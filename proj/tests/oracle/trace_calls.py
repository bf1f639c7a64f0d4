#!/usr/bin/env python3
"""Tracing oracle: executes a notebook's code cells and records, per notebook
line, the fully-qualified names of the functions called from that line.

The output is a ground-truth JSON in the callsite-report format:

    {"cells": {"<code_index>": {"<cell_line>": ["fqn", ...]}}}

Canonical fqn rules (computed purely from the live interpreter, independent
of the analyzer implementation):

  * plain function        -> module + "." + qualname, with ".<locals>." elided
  * bound method          -> type(self) module/qualname + "." + invoked name
  * constructor           -> the class fqn itself (the trailing ".__init__"
                             of the instance type is stripped)
  * script-level function -> qualname with ".<locals>." elided, no module
                             prefix (user code has no package)

A runtime call event is attributed to the notebook line of its calling frame
when that frame belongs to the executed script, and transitively to every
enclosing script frame (this mirrors charging calls made inside user-defined
functions to the cells that invoke them).  Events whose callee name does not
occur as `name(` on the innermost attributed line are dropped; this keeps
operator-driven internals (implicit __getitem__, property getters) out of
the truth.  When a method is invoked through an alias attribute (pandas
`agg` for `aggregate`), the alias found on the source line is used.

Fixtures must keep each call expression on a single physical line; the
CPython line attribution of multi-line calls varies across versions.
"""

import gc
import json
import os
import re
import sys
import types

SCRIPT_NAME = "<notebook>"
CALLED_NAME_RE = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\s*\(")


def flatten_notebook(nb):
    """Concatenate code-cell sources; magic/shell lines become placeholders.

    Returns (script_text, line_map) where line_map maps 1-based script line
    -> (code_index, cell_line).  Kept deliberately tiny and independent of
    the analyzer implementation.
    """
    lines = []
    line_map = {}
    code_index = 0
    for cell in nb["cells"]:
        if cell.get("cell_type") != "code":
            continue
        code_index += 1
        src = cell["source"]
        if isinstance(src, list):
            src = "".join(src)
        if src == "":
            continue
        cell_lines = src.split("\n")
        for i, ln in enumerate(cell_lines, start=1):
            stripped = ln.lstrip()
            if stripped[:1] in ("%", "!"):
                indent = ln[: len(ln) - len(stripped)]
                ln = indent + "pass"
            lines.append(ln)
            line_map[len(lines)] = (code_index, i)
    return "\n".join(lines), line_map


def qualname_of_code(code):
    """Best-effort qualname for a code object (py3.10 has no co_qualname)."""
    for ref in gc.get_referrers(code):
        if isinstance(ref, types.FunctionType) and ref.__code__ is code:
            return ref.__qualname__
    return code.co_name


def class_fqn(cls):
    base = getattr(cls, "__module__", None)
    q = getattr(cls, "__qualname__", None)
    if not isinstance(q, str):
        q = getattr(cls, "__name__", "?")
    if not isinstance(q, str):
        q = "?"
    q = q.replace(".<locals>.", ".")
    if not isinstance(base, str) or base in ("", "__main__"):
        return q
    return base + "." + q


def same_callable(candidate, code=None, cfunc=None):
    """Does attribute `candidate` dispatch to the observed callee?"""
    if candidate is None:
        return False
    seen = candidate
    for attr in ("__func__", "__wrapped__"):
        seen = getattr(seen, attr, seen)
    if code is not None:
        return getattr(seen, "__code__", None) is code
    if cfunc is not None:
        name = getattr(cfunc, "__name__", None)
        return getattr(seen, "__name__", None) == name
    return False


class Tracer:
    def __init__(self, script_lines):
        self.script_lines = script_lines
        self.records = set()  # (script_line, fqn)

    def script_frames(self, frame):
        chain = []
        f = frame
        while f is not None and f.f_code.co_filename == SCRIPT_NAME:
            chain.append(f)
            f = f.f_back
        return chain

    def called_names(self, lineno):
        if 1 <= lineno <= len(self.script_lines):
            return set(CALLED_NAME_RE.findall(self.script_lines[lineno - 1]))
        return set()

    def attribute(self, caller, fqn, name, self_cls=None, code=None, cfunc=None,
                  alias_ns=None):
        chain = self.script_frames(caller)
        if not chain:
            return
        names_on_line = self.called_names(chain[0].f_lineno)
        if name not in names_on_line:
            # invoked through an alias attribute of the receiver class?
            alias = None
            if self_cls is not None:
                for tok in names_on_line:
                    if same_callable(getattr(self_cls, tok, None), code=code, cfunc=cfunc):
                        alias = tok
                        break
                if alias is not None:
                    fqn = class_fqn(self_cls) + "." + alias
            # or a module-level alias (np.abs -> numpy.absolute)? the
            # defining fqn is kept; only the filter is satisfied
            if alias is None and alias_ns is not None:
                for tok in names_on_line:
                    target = getattr(alias_ns, tok, None)
                    if target is cfunc or same_callable(target, code=code, cfunc=cfunc):
                        alias = tok
                        break
            if alias is None:
                return
        for f in chain:
            self.records.add((f.f_lineno, fqn))

    def profile(self, frame, event, arg):
        try:
            self.profile_impl(frame, event, arg)
        except Exception:
            # never let an exotic library object break execution; events from
            # library internals are outside script frames anyway
            pass

    def profile_impl(self, frame, event, arg):
        if event == "call":
            code = frame.f_code
            caller = frame.f_back
            if caller is None:
                return
            name = code.co_name
            if name in ("<module>", "<lambda>", "<genexpr>", "<listcomp>", "<setcomp>", "<dictcomp>"):
                return
            selfobj = None
            if code.co_argcount > 0 and code.co_varnames[:1] in (("self",), ("cls",)):
                selfobj = frame.f_locals.get(code.co_varnames[0])
            if code.co_filename == SCRIPT_NAME:
                # user code: defining-class qualname, matching the analyzer's
                # scope-path naming (inherited methods keep the base class)
                fqn = qualname_of_code(code).replace(".<locals>.", ".")
                cls = None
                if selfobj is not None:
                    cls = selfobj if isinstance(selfobj, type) else type(selfobj)
                if name == "__init__" and fqn.endswith(".__init__"):
                    fqn = fqn[: -len(".__init__")]
                    name = fqn.rsplit(".", 1)[-1]
                self.attribute(caller, fqn, name, self_cls=cls, code=code)
                return
            module = frame.f_globals.get("__name__", "")
            cls = None
            if selfobj is not None:
                cls = selfobj if isinstance(selfobj, type) else type(selfobj)
                fqn = class_fqn(cls) + "." + name
            else:
                fqn = canonical = qualname_of_code(code).replace(".<locals>.", ".")
                if module and module != "__main__":
                    fqn = module + "." + canonical
            if name == "__init__" and fqn.endswith(".__init__"):
                fqn = fqn[: -len(".__init__")]
                name = fqn.rsplit(".", 1)[-1]
            self.attribute(caller, fqn, name, self_cls=cls, code=code)
        elif event == "c_call":
            func = arg
            name = getattr(func, "__name__", None)
            if name is None:
                return
            selfobj = getattr(func, "__self__", None)
            cls = None
            alias_ns = None
            if selfobj is not None and not isinstance(selfobj, types.ModuleType):
                cls = selfobj if isinstance(selfobj, type) else type(selfobj)
                fqn = class_fqn(cls) + "." + name
                if cls.__module__ == "builtins" and not fqn.startswith("builtins."):
                    fqn = "builtins." + fqn
            else:
                module = getattr(func, "__module__", None)
                if not isinstance(module, str) or not module:
                    module = "builtins"
                qn = getattr(func, "__qualname__", name)
                if not isinstance(qn, str):
                    qn = name
                fqn = qn if module == "__main__" else module + "." + qn
                alias_ns = sys.modules.get(module)
            if name == "__init__" and fqn.endswith(".__init__"):
                fqn = fqn[: -len(".__init__")]
                name = fqn.rsplit(".", 1)[-1]
            self.attribute(frame, fqn, name, self_cls=cls, cfunc=func, alias_ns=alias_ns)

    def on_class_instantiation(self, frame, cls):
        self.attribute(frame, class_fqn(cls), cls.__name__)


def trace_notebook(nb_path):
    with open(nb_path) as fh:
        nb = json.load(fh)
    script, line_map = flatten_notebook(nb)

    # Offline shims for fixture libraries.
    try:
        import seaborn.utils as _su

        _su.get_dataset_names = lambda: ["iris"]
    except ImportError:
        pass
    os.environ.setdefault("MPLBACKEND", "Agg")

    code = compile(script, SCRIPT_NAME, "exec")
    tracer = Tracer(script.split("\n"))
    glb = {"__name__": "__main__"}
    sys.setprofile(tracer.profile)
    try:
        exec(code, glb)
    finally:
        sys.setprofile(None)

    cells = {}
    for script_line, fqn in sorted(tracer.records):
        if script_line not in line_map:
            continue
        ci, cl = line_map[script_line]
        cells.setdefault(str(ci), {}).setdefault(str(cl), []).append(fqn)
    for ci in cells:
        for cl in cells[ci]:
            cells[ci][cl] = sorted(set(cells[ci][cl]))
    return {"cells": cells}


def main():
    if len(sys.argv) not in (2, 3):
        print("usage: trace_calls.py notebook.ipynb [truth.json]", file=sys.stderr)
        return 2
    truth = trace_notebook(sys.argv[1])
    out = json.dumps(truth, indent=2, sort_keys=True)
    if len(sys.argv) == 3:
        with open(sys.argv[2], "w") as fh:
            fh.write(out + "\n")
    else:
        print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
