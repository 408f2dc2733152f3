"""Parser for ``.catspec`` text.

Parsing runs in two passes. The first reads blocks and splits their bodies
into statements; the second builds declaration records, resolving names
against every block in the file so forward references work. Problems are
collected as diagnostics rather than raised one at a time.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..core import Edge, Quiver, free_category
from ..errors import CategoryError
from .lexer import EOF, NL, SYM, WORD, Token, tokenize
from .model import (
    CATEGORY_KINDS,
    CLAIM_KINDS,
    DUPLICATE,
    ERROR,
    INVALID,
    KINDS,
    SYNTAX,
    SYNTHESIZED_IDENTITY,
    TYPE_MISMATCH,
    UNKNOWN_ID,
    WARNING,
    AdjunctionDecl,
    AuditDecl,
    CategoryDecl,
    ClaimDecl,
    Diagnostic,
    FunctorDecl,
    LtsDecl,
    NatTransDecl,
    QuiverDecl,
    SpecError,
    SpecFile,
)


class _Syntax(Exception):
    def __init__(self, token: Token, message: str):
        super().__init__(message)
        self.token = token
        self.message = message


@dataclass
class _Block:
    kind: str
    name: Token
    header: dict
    stmts: list
    start: Token


class _Cursor:
    """Read position inside one statement's tokens."""

    def __init__(self, toks, end: Token):
        self.toks = toks
        self.i = 0
        self.end = end

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else self.end

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def at_end(self):
        return self.i >= len(self.toks)

    def ident(self, what="an identifier"):
        tok = self.take()
        if tok.type != WORD:
            raise _Syntax(tok, f"expected {what}, found {tok.describe()}")
        return tok

    def sym(self, s):
        tok = self.take()
        if not tok.is_sym(s):
            raise _Syntax(tok, f"expected {s!r}, found {tok.describe()}")
        return tok

    def maybe_sym(self, s):
        if self.peek().is_sym(s):
            return self.take()
        return None

    def rest_ids(self):
        out = []
        while not self.at_end():
            out.append(self.ident())
        return out

    def done(self):
        if not self.at_end():
            tok = self.peek()
            raise _Syntax(tok, f"unexpected {tok.describe()}")


# -- pass 1: blocks and statements ------------------------------------------------

def _read_fexpr(cur: _Cursor):
    """``TERM ('.' TERM)*`` where TERM is a functor name or ``Id(C)``."""
    terms = [_read_fterm(cur)]
    while cur.maybe_sym("."):
        terms.append(_read_fterm(cur))
    expr = terms[-1]
    for t in reversed(terms[:-1]):
        expr = ("comp", t, expr)
    return expr


def _read_fterm(cur: _Cursor):
    tok = cur.ident("a functor name or Id(C)")
    if tok.is_kw("Id") and cur.peek().is_sym("("):
        cur.take()
        cat = cur.ident("a category name")
        cur.sym(")")
        return ("id", cat)
    return ("ref", tok)


def _read_blocks(tokens, diags):
    blocks = []
    i = 0
    n = len(tokens)

    def skip_nl(j):
        while tokens[j].type == NL:
            j += 1
        return j

    while True:
        i = skip_nl(i)
        tok = tokens[i]
        if tok.type == EOF:
            break
        if not (tok.type == WORD and not tok.quoted and tok.text in KINDS):
            diags.append(_diag(SYNTAX, f"expected a declaration ({', '.join(KINDS)}), "
                               f"found {tok.describe()}", tok))
            i = _recover(tokens, i)
            continue
        kind = tok.text
        # header runs up to '{'
        j = i + 1
        while tokens[j].type not in (EOF,) and not tokens[j].is_sym("{"):
            if tokens[j].is_sym("}"):
                break
            j += 1
        header_toks = [t for t in tokens[i + 1:j] if t.type != NL]
        if not tokens[j].is_sym("{"):
            diags.append(_diag(SYNTAX, f"expected '{{' to open {kind} block", tokens[j]))
            i = _recover(tokens, j)
            continue
        try:
            name, header = _read_header(kind, header_toks, tokens[j])
        except _Syntax as exc:
            diags.append(_diag(SYNTAX, exc.message, exc.token))
            i = _skip_block(tokens, j)
            continue
        # body
        k = j + 1
        stmts = []
        cur = []
        closed = False
        while k < n:
            t = tokens[k]
            if t.type == EOF:
                break
            if t.is_sym("}"):
                closed = True
                break
            if t.is_sym("{"):
                diags.append(_diag(SYNTAX, "blocks cannot be nested", t))
            elif t.type == NL or t.is_sym(";"):
                if cur:
                    stmts.append(cur)
                cur = []
            else:
                cur.append(t)
            k += 1
        if cur:
            stmts.append(cur)
        if not closed:
            diags.append(_diag(SYNTAX, f"{kind} block {name.text!r} is never closed", tok))
            break
        blocks.append(_Block(kind, name, header, stmts, tok))
        i = k + 1
        after = tokens[i]
        if after.type not in (NL, EOF) and not after.is_sym(";"):
            diags.append(_diag(SYNTAX, f"expected end of line after '}}', found "
                               f"{after.describe()}", after))
            i = _recover(tokens, i)
        elif after.is_sym(";"):
            i += 1
    return blocks


def _read_header(kind, toks, brace):
    cur = _Cursor(toks, brace)
    name = cur.ident(f"a {kind} name")
    header = {}
    if kind == "functor":
        cur.sym(":")
        header["src"] = cur.ident("a source category")
        cur.sym("->")
        header["dst"] = cur.ident("a target category")
        header["contravariant"] = False
        if not cur.at_end():
            flag = cur.take()
            if flag.is_kw("contravariant"):
                header["contravariant"] = True
            elif not flag.is_kw("covariant"):
                raise _Syntax(flag, f"expected 'contravariant' or '{{', found {flag.describe()}")
    elif kind == "nattrans":
        cur.sym(":")
        header["source"] = _read_fexpr(cur)
        cur.sym("=>")
        header["target"] = _read_fexpr(cur)
    cur.done()
    return name, header


def _recover(tokens, i):
    """Skip to the next line, jumping over any block opened on the way."""
    while tokens[i].type != EOF:
        if tokens[i].is_sym("{"):
            return _skip_block(tokens, i)
        if tokens[i].type == NL:
            return i + 1
        i += 1
    return i


def _skip_block(tokens, i):
    while tokens[i].type != EOF and not tokens[i].is_sym("}"):
        i += 1
    return i + 1 if tokens[i].type != EOF else i


def _diag(code, message, tok: Token, severity=ERROR):
    return Diagnostic(severity, code, message, tok.line, tok.column)


# -- pass 2: declarations ---------------------------------------------------------------

@dataclass
class _CatInfo:
    """What later blocks need to know about a category-like declaration."""

    objects: set
    dom: dict  # morphism -> domain
    cod: dict
    ident: dict  # object -> identity morphism
    built: object = None  # FinCategory, when already constructed


@dataclass
class _Ctx:
    diags: list
    blocks: dict = field(default_factory=dict)  # (kind, name) -> _Block
    cats: dict = field(default_factory=dict)  # name -> _CatInfo
    functors: dict = field(default_factory=dict)  # name -> FunctorDecl
    nattrans: dict = field(default_factory=dict)
    claims: dict = field(default_factory=dict)
    kind_of: dict = field(default_factory=dict)  # name -> kind, category-likes only

    def err(self, code, message, tok):
        self.diags.append(_diag(code, message, tok))

    def warn(self, code, message, tok):
        self.diags.append(_diag(code, message, tok, WARNING))


def _statements(ctx: _Ctx, block: _Block, handlers):
    """Dispatch every statement to ``handlers[keyword]``."""
    for stmt in block.stmts:
        head = stmt[0]
        cur = _Cursor(stmt[1:], _end_of(stmt))
        key = head.text if head.type == WORD and not head.quoted else None
        handler = handlers.get(key)
        if handler is None:
            ctx.err(SYNTAX, f"unexpected {head.describe()} in {block.kind} block "
                    f"(expected one of: {', '.join(sorted(handlers))})", head)
            continue
        try:
            handler(head, cur)
        except _Syntax as exc:
            ctx.err(SYNTAX, exc.message, exc.token)


def _end_of(stmt):
    last = stmt[-1]
    return Token(NL, "\n", last.line, last.column + len(last.text))


def _labelled_arrow(cur: _Cursor):
    """``ID : ID -> ID [@ID]``"""
    name = cur.ident()
    cur.sym(":")
    src = cur.ident()
    cur.sym("->")
    dst = cur.ident()
    label = None
    if cur.maybe_sym("@"):
        label = cur.ident("a label").text
    cur.done()
    return name, src, dst, label


def _key_ids(cur: _Cursor):
    """``: ID*``"""
    cur.sym(":")
    return cur.rest_ids()


def _key_id(cur: _Cursor):
    cur.sym(":")
    tok = cur.ident()
    cur.done()
    return tok


def _build_category(ctx: _Ctx, b: _Block):
    objects = {}
    mors = {}
    ident = {}
    comps = {}
    null = []

    def on_objects(head, cur):
        for t in _key_ids(cur):
            if t.text in objects:
                ctx.err(DUPLICATE, f"object {t.text!r} declared twice", t)
            else:
                objects[t.text] = t

    def on_mor(head, cur):
        name, src, dst, label = _labelled_arrow(cur)
        if name.text in mors:
            ctx.err(DUPLICATE, f"morphism {name.text!r} declared twice", name)
        else:
            mors[name.text] = (name, src, dst, label)

    def on_id(head, cur):
        obj = cur.ident("an object")
        cur.sym("=")
        mor = cur.ident("a morphism")
        cur.done()
        if obj.text in ident:
            ctx.err(DUPLICATE, f"identity of {obj.text!r} declared twice", obj)
        else:
            ident[obj.text] = (obj, mor)

    def on_comp(head, cur):
        g = cur.ident("a morphism")
        cur.sym(".")
        f = cur.ident("a morphism")
        cur.sym("=")
        h = cur.ident("a morphism")
        cur.done()
        if (g.text, f.text) in comps:
            ctx.err(DUPLICATE, f"composite {g.text} . {f.text} declared twice", g)
        else:
            comps[(g.text, f.text)] = (g, f, h)

    def on_null(head, cur):
        tok = _key_id(cur)
        if null:
            ctx.err(DUPLICATE, "null object declared twice", tok)
        else:
            null.append(tok)

    _statements(ctx, b, {"objects": on_objects, "mor": on_mor, "id": on_id,
                         "comp": on_comp, "null": on_null})

    ok = True
    for name, src, dst, _ in mors.values():
        for t in (src, dst):
            if t.text not in objects:
                ctx.err(UNKNOWN_ID, f"unknown object {t.text!r} in morphism {name.text!r}", t)
                ok = False
    # an identity statement naming an undeclared morphism declares it
    declared_ids = []
    for obj, mor in ident.values():
        if obj.text not in objects:
            ctx.err(UNKNOWN_ID, f"unknown object {obj.text!r}", obj)
            ok = False
        elif mor.text not in mors:
            if mor.text in declared_ids:
                ctx.err(DUPLICATE, f"{mor.text!r} named as identity of two objects", mor)
                ok = False
            declared_ids.append(mor.text)
        elif (mors[mor.text][1].text, mors[mor.text][2].text) != (obj.text, obj.text):
            ctx.err(TYPE_MISMATCH, f"identity {mor.text!r} of {obj.text!r} must run "
                    f"{obj.text} -> {obj.text}", mor)
            ok = False
    if null and null[0].text not in objects:
        ctx.err(UNKNOWN_ID, f"unknown object {null[0].text!r}", null[0])
        ok = False

    # identities left out are synthesized as id_<obj>
    dom = {m: v[1].text for m, v in mors.items()}
    cod = {m: v[2].text for m, v in mors.items()}
    idmap = {o: v[1].text for o, v in ident.items()}
    added = []
    for o, (_, mor) in ident.items():
        if mor.text in declared_ids and mor.text not in dom:
            dom[mor.text] = cod[mor.text] = o
            added.append(mor.text)
    for o, tok in objects.items():
        if o in idmap:
            continue
        name = f"id_{o}"
        if name in mors:
            if (dom[name], cod[name]) != (o, o):
                ctx.err(TYPE_MISMATCH, f"no identity declared for {o!r} and {name!r} is not "
                        f"an endomorphism of it", tok)
                ok = False
                continue
        else:
            dom[name] = cod[name] = o
            added.append(name)
        idmap[o] = name
        ctx.warn(SYNTHESIZED_IDENTITY, f"identity of {o!r} not declared; using {name!r}", tok)

    defaults = _absorption(dom, cod, idmap)
    kept = []
    for (g, f), (gt, ft, ht) in comps.items():
        bad = False
        for t in (gt, ft, ht):
            if t.text not in dom:
                ctx.err(UNKNOWN_ID, f"unknown morphism {t.text!r}", t)
                bad = True
        if bad:
            ok = False
            continue
        if cod[f] != dom[g]:
            ctx.err(TYPE_MISMATCH, f"{g} . {f}: {f} ends at {cod[f]!r} but {g} starts at "
                    f"{dom[g]!r}", gt)
            ok = False
            continue
        h = ht.text
        if (dom[h], cod[h]) != (dom[f], cod[g]):
            ctx.err(TYPE_MISMATCH, f"{g} . {f} = {h}: expected a morphism {dom[f]} -> "
                    f"{cod[g]}, {h} is {dom[h]} -> {cod[h]}", ht)
            ok = False
            continue
        if defaults.get((f, g)) != h:
            kept.append((g, f, h))

    morphisms = [(m, v[1].text, v[2].text, v[3]) for m, v in mors.items()]
    morphisms += [(m, dom[m], cod[m], None) for m in added]
    if not ok:
        return None
    ctx.cats[b.name.text] = _CatInfo(set(objects), dom, cod, idmap)
    return CategoryDecl(b.name.text, tuple(objects), tuple(morphisms), tuple(idmap.items()),
                        tuple(kept), null[0].text if null else None)


def _absorption(dom, cod, idmap):
    """Composites implied by the identities: ``(f, g) -> h`` in diagrammatic order."""
    out = {}
    for m in dom:
        i = idmap.get(dom[m])
        if i is not None and cod.get(i) == dom[m]:
            out[(i, m)] = m
        j = idmap.get(cod[m])
        if j is not None and dom.get(j) == cod[m]:
            out[(m, j)] = m
    return out


def _build_graph(ctx: _Ctx, b: _Block, node_kw, edge_kw):
    """Shared body of quiver and lts blocks."""
    nodes = {}
    edges = {}

    def on_nodes(head, cur):
        for t in _key_ids(cur):
            if t.text in nodes:
                ctx.err(DUPLICATE, f"{'state' if b.kind == 'lts' else 'node'} {t.text!r} "
                        f"declared twice", t)
            else:
                nodes[t.text] = t

    def on_edge(head, cur):
        name, src, dst, label = _labelled_arrow(cur)
        if name.text in edges:
            ctx.err(DUPLICATE, f"{edge_kw} {name.text!r} declared twice", name)
        else:
            edges[name.text] = (name, src, dst, label)

    _statements(ctx, b, {node_kw: on_nodes, edge_kw: on_edge})
    ok = True
    for name, src, dst, _ in edges.values():
        for t in (src, dst):
            if t.text not in nodes:
                ctx.err(UNKNOWN_ID, f"unknown {'state' if b.kind == 'lts' else 'node'} "
                        f"{t.text!r} in {edge_kw} {name.text!r}", t)
                ok = False
    arrows = tuple((n, s.text, t.text, lab) for n, (_, s, t, lab) in edges.items())
    if not ok:
        return None, arrows, tuple(nodes)
    try:
        cat = free_category(Quiver(tuple(nodes), tuple(Edge(*a) for a in arrows)))
    except CategoryError as exc:
        ctx.err(INVALID, f"{b.kind} {b.name.text!r} does not generate a finite category: "
                f"{exc}", b.name)
        return None, arrows, tuple(nodes)
    ctx.cats[b.name.text] = _CatInfo(
        set(cat.objects),
        dict(zip(cat.mor_ids, (cat.objects[i] for i in cat.dom))),
        dict(zip(cat.mor_ids, (cat.objects[i] for i in cat.cod))),
        dict(cat.identity),
        cat,
    )
    return cat, arrows, tuple(nodes)


def _build_quiver(ctx, b):
    cat, arrows, nodes = _build_graph(ctx, b, "nodes", "edge")
    return QuiverDecl(b.name.text, nodes, arrows) if cat is not None else None


def _build_lts(ctx, b):
    cat, arrows, nodes = _build_graph(ctx, b, "states", "trans")
    return LtsDecl(b.name.text, nodes, arrows) if cat is not None else None


def _category_ref(ctx: _Ctx, tok: Token, role="category"):
    name = tok.text
    if name in ctx.cats:
        return ctx.cats[name]
    if (("category", name) in ctx.blocks or ("quiver", name) in ctx.blocks
            or ("lts", name) in ctx.blocks):
        return None  # declared but invalid; already reported
    other = [k for k in KINDS if (k, name) in ctx.blocks]
    if other:
        ctx.err(TYPE_MISMATCH, f"{name!r} is a {other[0]}, expected a {role}", tok)
    else:
        ctx.err(UNKNOWN_ID, f"unknown {role} {name!r}", tok)
    return None


def _build_functor(ctx: _Ctx, b: _Block):
    h = b.header
    src = _category_ref(ctx, h["src"])
    dst = _category_ref(ctx, h["dst"])
    objs = {}
    mors = {}
    theory = []

    def entry(table, what):
        def on(head, cur):
            a = cur.ident()
            cur.sym("=>")
            x = cur.ident()
            cur.done()
            if a.text in table:
                ctx.err(DUPLICATE, f"{what} {a.text!r} mapped twice", a)
            else:
                table[a.text] = (a, x)
        return on

    def on_theory(head, cur):
        tok = _key_id(cur)
        if theory:
            ctx.err(DUPLICATE, "theory label given twice", tok)
        else:
            theory.append(tok.text)

    _statements(ctx, b, {"obj": entry(objs, "object"), "mor": entry(mors, "morphism"),
                         "theory": on_theory})
    if src is None or dst is None:
        return None
    ok = True
    for a, x in objs.values():
        if a.text not in src.objects:
            ctx.err(UNKNOWN_ID, f"unknown object {a.text!r} in {h['src'].text!r}", a)
            ok = False
        if x.text not in dst.objects:
            ctx.err(UNKNOWN_ID, f"unknown object {x.text!r} in {h['dst'].text!r}", x)
            ok = False
    for f, u in mors.values():
        if f.text not in src.dom:
            ctx.err(UNKNOWN_ID, f"unknown morphism {f.text!r} in {h['src'].text!r}", f)
            ok = False
        if u.text not in dst.dom:
            ctx.err(UNKNOWN_ID, f"unknown morphism {u.text!r} in {h['dst'].text!r}", u)
            ok = False
    if not ok:
        return None
    missing = sorted(o for o in src.objects if o not in objs)
    if missing:
        ctx.err(TYPE_MISMATCH, f"functor {b.name.text!r} gives no image for object "
                f"{missing[0]!r}" + (f" and {len(missing) - 1} more" if len(missing) > 1 else ""),
                b.name)
        return None
    obj_map = {a: x.text for a, (_, x) in objs.items()}
    derived = {}
    for o, i in src.ident.items():
        target = dst.ident.get(obj_map[o])
        if target is not None:
            derived[i] = target
    mor_map = {}
    for f in src.dom:
        if f in mors:
            u = mors[f][1].text
            if derived.get(f) != u:
                mor_map[f] = u
        elif f not in derived:
            ctx.err(TYPE_MISMATCH, f"functor {b.name.text!r} gives no image for morphism "
                    f"{f!r}", b.name)
            ok = False
    if not ok:
        return None
    decl = FunctorDecl(b.name.text, h["src"].text, h["dst"].text, h["contravariant"],
                       theory[0] if theory else None, tuple(obj_map.items()),
                       tuple(mor_map.items()))
    ctx.functors[decl.name] = decl
    return decl


def _fexpr_type(ctx: _Ctx, expr):
    """Resolve a functor expression to ``(expr_with_names, src, dst)`` or None."""
    tag = expr[0]
    if tag == "ref":
        tok = expr[1]
        decl = ctx.functors.get(tok.text)
        if decl is None:
            if ("functor", tok.text) not in ctx.blocks:
                other = [k for k in KINDS if (k, tok.text) in ctx.blocks]
                if other:
                    ctx.err(TYPE_MISMATCH, f"{tok.text!r} is a {other[0]}, expected a functor",
                            tok)
                else:
                    ctx.err(UNKNOWN_ID, f"unknown functor {tok.text!r}", tok)
            return None
        return ("ref", tok.text), decl.src, decl.dst
    if tag == "id":
        tok = expr[1]
        if _category_ref(ctx, tok) is None:
            return None
        return ("id", tok.text), tok.text, tok.text
    outer = _fexpr_type(ctx, expr[1])
    inner = _fexpr_type(ctx, expr[2])
    if outer is None or inner is None:
        return None
    if inner[2] != outer[1]:
        ctx.err(TYPE_MISMATCH, f"cannot compose: {format_fexpr(inner[0])} lands in "
                f"{inner[2]!r} but {format_fexpr(outer[0])} starts at {outer[1]!r}",
                _first_token(expr))
        return None
    return ("comp", outer[0], inner[0]), inner[1], outer[2]


def _first_token(expr):
    while expr[0] == "comp":
        expr = expr[1]
    return expr[1]


def format_fexpr(expr):
    tag = expr[0]
    if tag == "ref":
        return expr[1] if isinstance(expr[1], str) else expr[1].text
    if tag == "id":
        name = expr[1] if isinstance(expr[1], str) else expr[1].text
        return f"Id({name})"
    return f"{format_fexpr(expr[1])} . {format_fexpr(expr[2])}"


def _build_nattrans(ctx: _Ctx, b: _Block):
    comps = {}

    def on_at(head, cur):
        a = cur.ident("an object")
        cur.sym(":")
        u = cur.ident("a morphism")
        cur.done()
        if a.text in comps:
            ctx.err(DUPLICATE, f"component at {a.text!r} given twice", a)
        else:
            comps[a.text] = (a, u)

    _statements(ctx, b, {"at": on_at})
    s = _fexpr_type(ctx, b.header["source"])
    t = _fexpr_type(ctx, b.header["target"])
    if s is None or t is None:
        return None
    if (s[1], s[2]) != (t[1], t[2]):
        ctx.err(TYPE_MISMATCH, f"{format_fexpr(s[0])} and {format_fexpr(t[0])} are not "
                f"parallel ({s[1]} -> {s[2]} vs {t[1]} -> {t[2]})", b.name)
        return None
    src, dst = ctx.cats.get(s[1]), ctx.cats.get(s[2])
    if src is None or dst is None:
        return None
    ok = True
    for a, u in comps.values():
        if a.text not in src.objects:
            ctx.err(UNKNOWN_ID, f"unknown object {a.text!r} in {s[1]!r}", a)
            ok = False
        if u.text not in dst.dom:
            ctx.err(UNKNOWN_ID, f"unknown morphism {u.text!r} in {s[2]!r}", u)
            ok = False
    missing = sorted(o for o in src.objects if o not in comps)
    if ok and missing:
        ctx.err(TYPE_MISMATCH, f"no component at {missing[0]!r}", b.name)
        ok = False
    if not ok:
        return None
    decl = NatTransDecl(b.name.text, s[0], t[0],
                        tuple((a, u.text) for a, (_, u) in comps.items()))
    ctx.nattrans[decl.name] = decl
    return decl


def _fields(ctx: _Ctx, b: _Block, scalar, lists=(), repeated=()):
    """Read ``key: value`` statements into a dict of tokens / token lists."""
    got = {}

    def single(key):
        def on(head, cur):
            tok = _key_id(cur)
            if key in got:
                ctx.err(DUPLICATE, f"{key!r} given twice", head)
            else:
                got[key] = tok
        return on

    def many(key):
        def on(head, cur):
            toks = _key_ids(cur)
            if key in got:
                ctx.err(DUPLICATE, f"{key!r} given twice", head)
            else:
                got[key] = toks
        return on

    def again(key):
        def on(head, cur):
            got.setdefault(key, []).append((head, _key_ids(cur)))
        return on

    handlers = {k: single(k) for k in scalar}
    handlers.update({k: many(k) for k in lists})
    handlers.update({k: again(k) for k in repeated})
    _statements(ctx, b, handlers)
    return got


def _require(ctx, b, got, keys):
    missing = [k for k in keys if k not in got]
    for k in missing:
        ctx.err(TYPE_MISMATCH, f"{b.kind} {b.name.text!r} needs a {k!r} entry", b.name)
    return not missing


def _functor_ref(ctx: _Ctx, tok: Token):
    decl = ctx.functors.get(tok.text)
    if decl is None and ("functor", tok.text) not in ctx.blocks:
        other = [k for k in KINDS if (k, tok.text) in ctx.blocks]
        if other:
            ctx.err(TYPE_MISMATCH, f"{tok.text!r} is a {other[0]}, expected a functor", tok)
        else:
            ctx.err(UNKNOWN_ID, f"unknown functor {tok.text!r}", tok)
    return decl


def _nattrans_ref(ctx: _Ctx, tok: Token):
    decl = ctx.nattrans.get(tok.text)
    if decl is None and ("nattrans", tok.text) not in ctx.blocks:
        other = [k for k in KINDS if (k, tok.text) in ctx.blocks]
        if other:
            ctx.err(TYPE_MISMATCH, f"{tok.text!r} is a {other[0]}, expected a nattrans", tok)
        else:
            ctx.err(UNKNOWN_ID, f"unknown nattrans {tok.text!r}", tok)
    return decl


def _build_adjunction(ctx: _Ctx, b: _Block):
    got = _fields(ctx, b, ("F", "G", "unit", "counit"))
    if not _require(ctx, b, got, ("F", "G", "unit", "counit")):
        return None
    F = _functor_ref(ctx, got["F"])
    G = _functor_ref(ctx, got["G"])
    unit = _nattrans_ref(ctx, got["unit"])
    counit = _nattrans_ref(ctx, got["counit"])
    if None in (F, G, unit, counit):
        return None
    if (F.src, F.dst) != (G.dst, G.src):
        ctx.err(TYPE_MISMATCH, f"{F.name} and {G.name} do not run in opposite directions",
                got["G"])
        return None
    return AdjunctionDecl(b.name.text, F.name, G.name, unit.name, counit.name)


_CLAIM_FIELDS = ("direction", "phys", "abs", "R", "Rt", "R_prime", "eta", "mode")
_CLAIM_LISTS = ("chain", "layers", "links")


def _build_claim(ctx: _Ctx, b: _Block):
    got = _fields(ctx, b, _CLAIM_FIELDS, _CLAIM_LISTS, ("realize",))
    direction = got["direction"].text if "direction" in got else "compute"
    if direction not in CLAIM_KINDS:
        ctx.err(TYPE_MISMATCH, f"unknown direction {direction!r} (expected one of: "
                f"{', '.join(CLAIM_KINDS)})", got["direction"])
        return None
    ok = True
    allowed = {
        "compute": {"phys", "abs", "R", "Rt", "chain"},
        "predict": {"phys", "abs", "R", "Rt", "chain"},
        "causal": {"phys", "abs", "R", "Rt"},
        "refinement": {"phys", "abs", "R", "R_prime", "eta"},
        "realizability": {"abs", "mode", "realize"},
        "nested": {"layers", "links"},
    }[direction] | {"direction"}
    for key in got:
        if key not in allowed:
            ctx.err(TYPE_MISMATCH, f"{key!r} does not apply to a {direction} claim", b.name)
            ok = False
    val = {k: v.text for k, v in got.items() if isinstance(v, Token)}

    if direction in ("compute", "predict", "causal"):
        ok &= _require(ctx, b, got, ("phys", "abs", "R", "Rt"))
        if ok:
            phys = _category_ref(ctx, got["phys"])
            abs_ = _category_ref(ctx, got["abs"])
            R = _functor_ref(ctx, got["R"])
            Rt = _functor_ref(ctx, got["Rt"])
            if None in (phys, abs_, R, Rt):
                return None
            ok &= _claim_typing(ctx, got, R, Rt)
            for t in got.get("chain", []):
                if t.text not in phys.dom:
                    ctx.err(UNKNOWN_ID, f"unknown morphism {t.text!r} in {val['phys']!r}", t)
                    ok = False
    elif direction == "refinement":
        ok &= _require(ctx, b, got, ("R", "R_prime", "eta"))
        if ok:
            R = _functor_ref(ctx, got["R"])
            R2 = _functor_ref(ctx, got["R_prime"])
            eta = _nattrans_ref(ctx, got["eta"])
            if None in (R, R2, eta):
                return None
            if (R.src, R.dst) != (R2.src, R2.dst):
                ctx.err(TYPE_MISMATCH, f"{R.name} and {R2.name} are not parallel",
                        got["R_prime"])
                ok = False
            elif (eta.source, eta.target) != (("ref", R.name), ("ref", R2.name)):
                ctx.err(TYPE_MISMATCH, f"{eta.name} does not run from {R.name} to {R2.name}",
                        got["eta"])
                ok = False
            for key, want in (("phys", R.src), ("abs", R.dst)):
                if key in val and val[key] != want:
                    ctx.err(TYPE_MISMATCH, f"{key} is {val[key]!r} but {R.name} runs "
                            f"{R.src} -> {R.dst}", got[key])
                    ok = False
    elif direction == "realizability":
        ok &= _require(ctx, b, got, ("abs", "realize"))
        mode = val.get("mode", "strict")
        if mode not in ("strict", "relaxed"):
            ctx.err(TYPE_MISMATCH, f"mode must be strict or relaxed, not {mode!r}", got["mode"])
            ok = False
        if ok and _category_ref(ctx, got["abs"]) is not None:
            for head, toks in got["realize"]:
                if len(toks) not in (3, 5):
                    ctx.err(SYNTAX, "realize takes: phys R Rt [unit counit]", head)
                    ok = False
                    continue
                phys = _category_ref(ctx, toks[0])
                R = _functor_ref(ctx, toks[1])
                Rt = _functor_ref(ctx, toks[2])
                nts = [_nattrans_ref(ctx, t) for t in toks[3:]]
                if None in (phys, R, Rt) or None in nts:
                    ok = False
                    continue
                fake = {"phys": toks[0], "abs": got["abs"], "R": toks[1], "Rt": toks[2]}
                ok &= _claim_typing(ctx, fake, R, Rt)
        else:
            ok = False
    else:  # nested
        ok &= _require(ctx, b, got, ("layers",))
        if ok:
            for t in got["layers"]:
                if ("claim", t.text) not in ctx.blocks:
                    ctx.err(UNKNOWN_ID, f"unknown claim {t.text!r}", t)
                    ok = False
            for t in got.get("links", []):
                ok &= _functor_ref(ctx, t) is not None
    if not ok:
        return None
    return ClaimDecl(
        b.name.text, direction,
        val.get("phys"), val.get("abs"), val.get("R"), val.get("Rt"), val.get("R_prime"),
        val.get("eta"), val.get("mode"),
        tuple(t.text for t in got.get("chain", [])),
        tuple(t.text for t in got.get("layers", [])),
        tuple(t.text for t in got.get("links", [])),
        tuple(tuple(t.text for t in toks) for _, toks in got.get("realize", [])),
    )


def _claim_typing(ctx, got, R, Rt):
    phys, abs_ = got["phys"].text, got["abs"].text
    ok = True
    if (R.src, R.dst) != (phys, abs_):
        ctx.err(TYPE_MISMATCH, f"R must run {phys} -> {abs_}, {R.name} runs {R.src} -> {R.dst}",
                got["R"])
        ok = False
    if (Rt.src, Rt.dst) != (abs_, phys):
        ctx.err(TYPE_MISMATCH, f"Rt must run {abs_} -> {phys}, {Rt.name} runs "
                f"{Rt.src} -> {Rt.dst}", got["Rt"])
        ok = False
    return ok


def _build_audit(ctx: _Ctx, b: _Block):
    got = _fields(ctx, b, ("phys", "abs"))
    if not _require(ctx, b, got, ("phys", "abs")):
        return None
    phys = got["phys"]
    if ("lts", phys.text) not in ctx.blocks:
        if any((k, phys.text) in ctx.blocks for k in KINDS):
            ctx.err(TYPE_MISMATCH, f"audit phys must be an lts, {phys.text!r} is not", phys)
        else:
            ctx.err(UNKNOWN_ID, f"unknown lts {phys.text!r}", phys)
        return None
    if _category_ref(ctx, got["abs"]) is None:
        return None
    return AuditDecl(b.name.text, phys.text, got["abs"].text)


_BUILDERS = {
    "category": _build_category,
    "quiver": _build_quiver,
    "lts": _build_lts,
    "functor": _build_functor,
    "nattrans": _build_nattrans,
    "adjunction": _build_adjunction,
    "claim": _build_claim,
    "audit": _build_audit,
}


def parse_with_diagnostics(text: str):
    """``(SpecFile or None, diagnostics)``; None whenever there is an error."""
    tokens, diags = tokenize(text)
    blocks = _read_blocks(tokens, diags)
    ctx = _Ctx(diags)
    unique = []
    for b in blocks:
        key = (b.kind, b.name.text)
        clash = [k for k in CATEGORY_KINDS if (k, b.name.text) in ctx.blocks] \
            if b.kind in CATEGORY_KINDS else ([b.kind] if key in ctx.blocks else [])
        if clash:
            ctx.err(DUPLICATE, f"{b.kind} {b.name.text!r} clashes with an earlier "
                    f"{clash[0]} of the same name", b.name)
            continue
        ctx.blocks[key] = b
        unique.append(b)

    built = {}
    for kind in KINDS:
        for b in unique:
            if b.kind == kind:
                built[(b.kind, b.name.text)] = _BUILDERS[kind](ctx, b)

    diags.sort(key=lambda d: (d.line, d.column, d.code))
    if any(d.severity == ERROR for d in diags) or any(v is None for v in built.values()):
        if not any(d.severity == ERROR for d in diags):  # pragma: no cover - defensive
            diags.append(Diagnostic(ERROR, INVALID, "spec could not be built", 1, 1))
        return None, diags
    decls = tuple(built[(b.kind, b.name.text)] for b in unique)
    source_map = {(b.kind, b.name.text): (b.start.line, b.start.column) for b in unique}
    prebuilt = {name: info.built for name, info in ctx.cats.items() if info.built is not None}
    return SpecFile(decls, source_map, tuple(diags), prebuilt), diags


def parse(text: str) -> SpecFile:
    """Parse spec text. Raises :class:`SpecError` carrying the diagnostics
    when there is any error; warnings travel on ``SpecFile.diagnostics``."""
    spec, diags = parse_with_diagnostics(text)
    if spec is None:
        raise SpecError(diags)
    return spec
