#!/usr/bin/env python3
"""Minimal stand-in for the E-utilities esearch endpoint over the MINI corpus.

Supports Boolean queries with AND/OR/NOT evaluated left to right, parentheses, quoted
phrases and the [tiab], [Title/Abstract], [All Fields], [mh], [MeSH Terms] tags. MeSH terms
are exploded to their descendants through tree numbers. Used only to record replay fixtures.

    python3 fake_eutils.py DATA_DIR PORT
"""

import json
import re
import sys
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse


def tokens(text):
    return re.findall(r"[a-z0-9]+", text.lower())


class Corpus:
    def __init__(self, data_dir):
        data_dir = Path(data_dir)
        self.docs, self.atm = [], {}
        for line in (data_dir / "corpus.jsonl").read_text().splitlines():
            rec = json.loads(line)
            if "atm" in rec:
                self.atm[rec["atm"]] = rec["translation"]
            else:
                rec["tokens"] = tokens(rec["text"])
                self.docs.append(rec)
        self.names, self.trees = {}, {}
        for line in (data_dir / "mesh.tsv").read_text().splitlines():
            if not line or line.startswith("#"):
                continue
            uid, name, entries, trees = line.split("\t")
            for n in [name] + [e for e in entries.split(";") if e]:
                self.names.setdefault(n.lower(), uid)
            self.names[name.lower()] = uid
            self.trees[uid] = [t for t in trees.split(";") if t]

    def exploded(self, uid):
        roots = self.trees.get(uid, [])
        return {u for u, ts in self.trees.items()
                if any(t == r or t.startswith(r + ".") for t in ts for r in roots)}

    def match(self, doc, phrase, field):
        if field in ("mesh", "all"):
            uid = self.names.get(phrase.lower())
            if uid and self.exploded(uid) & set(doc["mesh"]):
                return True
            if field == "mesh":
                return False
        want = tokens(phrase)
        toks = doc["tokens"]
        return any(toks[i:i + len(want)] == want for i in range(len(toks) - len(want) + 1)) if want else False


FIELD = {"tiab": "text", "title/abstract": "text", "all fields": "all", "mh": "mesh", "mesh": "mesh",
         "mesh terms": "mesh"}
TOKEN = re.compile(r'\s*(?:(\()|(\))|"([^"]*)"|([^\s()"\[]+))(?:\[([^\]]*)\])?')


def parse(query):
    pos, out = 0, []
    while pos < len(query):
        m = TOKEN.match(query, pos)
        if not m or m.end() == pos:
            if query[pos:].strip() == "":
                break
            raise ValueError(f"cannot parse at {pos}")
        pos = m.end()
        lp, rp, quoted, word, tag = m.groups()
        if lp:
            out.append(("(", None, None))
        elif rp:
            out.append((")", None, None))
        elif quoted is not None:
            out.append(("term", quoted, tag))
        elif word.upper() in ("AND", "OR", "NOT") and tag is None:
            out.append((word.upper(), None, None))
        else:
            # consecutive bare words form one phrase, as in the library's parser
            if out and out[-1][0] == "term" and out[-1][2] is None and not out[-1][1].startswith('"'):
                prev = out.pop()
                out.append(("term", prev[1] + " " + word, tag))
            else:
                out.append(("term", word, tag))
    return out


def evaluate(corpus, toks):
    pos = 0

    def operand():
        nonlocal pos
        kind, text, tag = toks[pos]
        pos += 1
        if kind == "(":
            result = expr()
            pos += 1  # ')'
            return result
        field = FIELD.get((tag or "all fields").lower(), "all")
        return {d["pmid"] for d in corpus.docs if corpus.match(d, text, field)}

    def expr():
        nonlocal pos
        result = operand()
        while pos < len(toks) and toks[pos][0] in ("AND", "OR", "NOT"):
            op = toks[pos][0]
            pos += 1
            right = operand()
            result = result & right if op == "AND" else result | right if op == "OR" else result - right
        return result

    return expr()


class Handler(BaseHTTPRequestHandler):
    corpus = None

    def log_message(self, *args):
        pass

    def do_GET(self):
        url = urlparse(self.path)
        if not url.path.endswith("/esearch.fcgi"):
            self.send_error(404)
            return
        q = {k: v[0] for k, v in parse_qs(url.query, keep_blank_values=True).items()}
        term = q.get("term", "")
        retmax, retstart = int(q.get("retmax", "20")), int(q.get("retstart", "0"))
        if retmax == 0:
            translation = self.corpus.atm.get(term.lower(), f'"{term.lower()}"[All Fields]')
            ids = []
        else:
            translation = term
            try:
                hits = evaluate(self.corpus, parse(term))
            except (ValueError, IndexError) as e:
                self.reply(400, {"error": str(e)})
                return
            lo, hi = q.get("mindate"), q.get("maxdate")
            docs = [d for d in self.corpus.docs if d["pmid"] in hits
                    and (not lo or d["edat"] >= lo) and (not hi or d["edat"] <= hi)]
            # newest first, like PubMed's default sort
            ids = [d["pmid"] for d in sorted(docs, key=lambda d: (d["edat"], d["pmid"]), reverse=True)]
        count = len(ids)
        page = ids[retstart:retstart + retmax]
        self.reply(200, {"header": {"type": "esearch", "version": "0.3"},
                         "esearchresult": {"count": str(count), "retmax": str(len(page)),
                                           "retstart": str(retstart), "idlist": page,
                                           "querytranslation": translation}})

    def reply(self, status, payload):
        body = json.dumps(payload).encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)


def main():
    Handler.corpus = Corpus(sys.argv[1])
    server = ThreadingHTTPServer(("127.0.0.1", int(sys.argv[2])), Handler)
    print(f"fake esearch on port {server.server_port}", flush=True)
    server.serve_forever()


if __name__ == "__main__":
    main()
