"""Pass/fail reports for structure checks.

A report is a list of named checks.  Output ordering is canonical
(sorted by check name) so that a report is deterministic whenever the
inputs, bounds, and seeds are.
"""


class Report:
    def __init__(self, title=""):
        self.title = title
        self.checks = []

    def add(self, name, ok, detail=""):
        self.checks.append((name, bool(ok), detail))
        return self

    def merge(self, other, prefix=""):
        for name, ok, detail in other.checks:
            self.checks.append((prefix + name, ok, detail))
        return self

    @property
    def ok(self):
        return all(ok for _, ok, _ in self.checks)

    def failures(self):
        return [(name, detail) for name, ok, detail in self.checks if not ok]

    def lines(self):
        out = []
        for name, ok, detail in sorted(self.checks):
            line = "%s %s" % ("PASS" if ok else "FAIL", name)
            if detail:
                line += ": %s" % detail
            out.append(line)
        return out

    def text(self):
        head = ["== %s ==" % self.title] if self.title else []
        tail = ["%d checks, %d failed" % (len(self.checks), len(self.failures()))]
        return "\n".join(head + self.lines() + tail)

    def to_json(self):
        return {
            "title": self.title,
            "ok": self.ok,
            "checks": [
                {"name": name, "ok": ok, "detail": detail}
                for name, ok, detail in sorted(self.checks)
            ],
        }

    def __repr__(self):
        return "Report(%r, %d checks, ok=%s)" % (self.title, len(self.checks), self.ok)
