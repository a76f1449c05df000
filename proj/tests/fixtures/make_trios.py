#!/usr/bin/env python3
"""Writes the evaluation trios under trios/<name>/{g2,candidate,target}.xtext.

Each trio has `required` rules that differ between g2 and target, of which
`correct` are reproduced by the candidate, plus `unchanged` rules identical
in all three files.
"""
import pathlib

DOT = """Graph Subgraph Stmt NodeStmt EdgeStmt AttrStmt AList AttrList Attribute
EdgeRhs EdgeRhsNode EdgeRhsSubgraph NodeId Port Compass Keyword Html Label
Cluster Rank Style Shape Color Font""".split()

XCORE = """XPackage XAnnotation XStringToStringMapEntry XImportDirective XClassifier
XClass XDataType XEnum XEnumLiteral XTypeParameter XMember XStructuralFeature
XAttribute XReference XOperation XParameter XGenericType XBlockExpression
XOperationCall XFeatureCall XConstructorCall XClosure XCastedExpression
XBinaryOperation XUnaryOperation XPostfixOperation XMemberFeatureCall XIfExpression
XSwitchExpression XCasePart XForLoop XBasicForLoop XWhileExpression XDoWhileExpression
XVariableDeclaration XTryCatch XCatchClause XThrowExpression XReturnExpression
XSynchronized""".split()


def body(lines):
    return "\n".join("    " + l for l in lines)


def rule(name, lines):
    return f"{name} returns {name}:\n{body(lines)};\n"


def template(kind, name, ref):
    """(g2, target, wrong candidate) bodies for one rule needing adaptation."""
    if kind == 0:
        g2 = [f"'{name}'", "'{'", "    'name' name=EString", "    ('value' value=EString)?", "'}'"]
        target = [f"'{name}' name=ID", "'{'", "    ('value' value=STRING)?", "'}'"]
        wrong = [f"'{name}' 'name' name=ID", "'{'", "    ('value' value=STRING)?", "'}'"]
    elif kind == 1:
        g2 = [f"'{name}'", "'{'", f"    ('items' '{{' items+={ref} ( \",\" items+={ref})* '}}' )?", "'}'"]
        target = [f"'{name}'", "'{'", f"    (items+={ref} (\";\" items+={ref})*)?", "'}'"]
        wrong = [f"'{name}'", "'{'", f"    ('items' items+={ref} (\",\" items+={ref})*)?", "'}'"]
    else:
        g2 = [f"'{name}'", "'{'", "    ('id' id=EString)?", "'}'"]
        target = [f"'{name}'", "('{'", "    ('id' id=EString ';')?", "'}')?"]
        wrong = [f"'{name}'", "'{'", "    ('id' id=EString ';')?", "'}'"]
    return g2, target, wrong


def trio(names, required, correct):
    g2, cand, tgt = [], [], []
    for i, name in enumerate(names):
        if i < required:
            a, b, w = template(i % 3, name, names[(i + 1) % len(names)])
            g2.append(rule(name, a))
            tgt.append(rule(name, b))
            cand.append(rule(name, b if i < correct else w))
        else:
            same = rule(name, [f"'{name.lower()}' name=ID"])
            g2.append(same)
            tgt.append(same)
            cand.append(same)
    return {"g2": g2, "candidate": cand, "target": tgt}


def write(root, name, files):
    d = root / name
    d.mkdir(parents=True, exist_ok=True)
    for part, rules in files.items():
        (d / f"{part}.xtext").write_text("\n".join(rules))


def main():
    root = pathlib.Path(__file__).resolve().parent / "trios"
    write(root, "dot", trio(DOT, required=19, correct=16))
    write(root, "xcore", trio(XCORE, required=32, correct=20))
    write(root, "vacuous", trio(DOT[:6], required=0, correct=0))


if __name__ == "__main__":
    main()
