"""Writes the recorded HTTP transcripts used by the ingest replay tests."""
import json
import os

HERE = os.path.dirname(os.path.abspath(__file__))
RATE = {"X-RateLimit-Remaining": "4990", "X-RateLimit-Reset": "1710003600"}


def ex(path, body, query=None, status=200, headers=None):
    return {
        "request": {"method": "GET", "path": path, "query": query or {}},
        "response": {"status": status, "headers": headers or dict(RATE), "body": body},
    }


def page(n, per_page=100, **extra):
    q = {"per_page": str(per_page), "page": str(n)}
    q.update(extra)
    return q


def sha(i):
    return ("%040x" % (0xABC000 + i))


def write(name, entries):
    with open(os.path.join(HERE, name), "w") as f:
        json.dump(entries, f, indent=1)
        f.write("\n")


def repo_basic():
    base = "/repos/acme/widget"
    commits = [
        {"sha": sha(3), "author": {"login": "carol"},
         "commit": {"author": {"date": "2024-03-05T10:00:00Z"},
                    "message": "Tidy docs\n\nCo-authored-by: Dan <dan@example.com>"}},
        {"sha": sha(2), "author": None,
         "commit": {"author": {"date": "2024-03-04T09:30:00Z"}, "message": "Bump version"}},
        {"sha": sha(1), "author": {"login": "alice"},
         "commit": {"author": {"date": "2024-03-01T08:00:00Z"},
                    "message": "Add parser\n\nCo-authored-by: Linus <1024+torvalds@users.noreply.github.com>\n"
                               "Co-authored-by: Linus again <1024+torvalds@users.noreply.github.com>"}},
    ]
    details = {
        sha(1): {"stats": {"additions": 120, "deletions": 4}, "files": [{"filename": "src/parser.c"}, {"filename": "README.md"}]},
        sha(2): {"stats": {"additions": 1, "deletions": 1}, "files": [{"filename": "VERSION"}]},
        sha(3): {"stats": {"additions": 7, "deletions": 2}, "files": [{"filename": "docs/index.md"}]},
    }
    issues = [
        {"number": 5, "user": {"login": "spammer"}, "title": "Free tokens", "body": "Claim at https://claim.example/x",
         "created_at": "2024-03-06T00:00:00Z", "closed_at": None, "state": "open"},
        {"number": 4, "user": {"login": "bob"}, "title": "Fix typo", "body": None,
         "created_at": "2024-03-02T00:00:00Z", "closed_at": None, "state": "open", "pull_request": {"url": "x"}},
        {"number": 2, "user": {"login": "bob"}, "title": "Crash on empty input", "body": "Steps: run it",
         "created_at": "2024-02-20T00:00:00Z", "closed_at": "2024-02-22T12:00:00Z", "state": "closed"},
    ]
    pulls = [
        {"number": 4, "user": {"login": "bob"}, "title": "Fix typo", "body": None,
         "created_at": "2024-03-02T00:00:00Z", "closed_at": None, "merged_at": None, "state": "open"},
        {"number": 3, "user": {"login": "carol"}, "title": "Speed up lexer", "body": "Uses a table.",
         "created_at": "2024-02-25T00:00:00Z", "closed_at": "2024-02-26T00:00:00Z",
         "merged_at": "2024-02-26T00:00:00Z", "state": "closed"},
        {"number": 1, "user": {"login": "eve"}, "title": "Rewrite everything", "body": "",
         "created_at": "2024-02-10T00:00:00Z", "closed_at": "2024-02-11T00:00:00Z", "merged_at": None, "state": "closed"},
    ]
    stars = [
        {"starred_at": "2024-03-03T00:00:00Z", "user": {"login": "zed"}},
        {"starred_at": "2024-02-01T00:00:00Z", "user": {"login": "amy"}},
        {"starred_at": "2024-03-03T00:00:00Z", "user": {"login": "bea"}},
    ]
    entries = [
        ex(base, {"full_name": "acme/widget", "description": "A tiny parser widget", "stargazers_count": 3,
                  "forks_count": 1, "topics": ["parser", "C", "parser"]}),
        ex(base + "/readme", "# widget\n\nA tiny parser for config files.\n"),
        ex(base + "/commits", commits, page(1)),
        ex(base + "/issues", issues, page(1, state="all")),
        ex(base + "/pulls", pulls, page(1, state="all")),
        ex(base + "/stargazers", stars, page(1)),
    ]
    for s, d in details.items():
        entries.append(ex(base + "/commits/" + s, d))
    write("repo_basic.json", entries)


def repo_many_stars():
    base = "/repos/acme/popular"
    stars = [{"starred_at": "2024-01-01T%02d:%02d:00Z" % (i // 60, i % 60), "user": {"login": "fan%03d" % i}}
             for i in range(100)]
    entries = [
        ex(base, {"full_name": "acme/popular", "description": None, "stargazers_count": 250, "forks_count": 0,
                  "topics": []}),
        ex(base + "/readme", {"message": "Not Found"}, status=404),
        ex(base + "/commits", [], page(1)),
        ex(base + "/issues", [], page(1, state="all")),
        ex(base + "/pulls", [], page(1, state="all")),
        ex(base + "/stargazers", stars, page(1)),
    ]
    write("repo_many_stars.json", entries)


def repo_missing():
    write("repo_missing.json", [ex("/repos/ghost/none", {"message": "Not Found"}, status=404)])


def user_basic():
    base = "/users/mallory"
    readme = ("## Hi\n\n![stats](https://github-readme-stats.vercel.app/api?username=torvalds&show_icons=true)\n"
              "![streak](https://streak-stats.demolab.com?user=mallory)\n"
              "Blog: https://mallory.example/blog.\n")
    events = [
        {"type": "IssueCommentEvent", "created_at": "2024-03-05T00:00:00Z", "repo": {"name": "big/project"},
         "payload": {"action": "created", "issue": {"number": 12}}},
        {"type": "IssueCommentEvent", "created_at": "2024-03-04T00:00:00Z", "repo": {"name": "big/project"},
         "payload": {"action": "created", "issue": {"number": 9, "pull_request": {}}}},
        {"type": "PullRequestReviewEvent", "created_at": "2024-03-03T00:00:00Z", "repo": {"name": "big/project"},
         "payload": {"action": "created", "pull_request": {"number": 9}}},
        {"type": "PushEvent", "created_at": "2024-03-02T00:00:00Z", "repo": {"name": "mallory/site"}, "payload": {}},
        {"type": "WatchEvent", "created_at": "2024-03-01T00:00:00Z", "repo": {"name": "big/project"},
         "payload": {"action": "started"}},
        {"type": "IssuesEvent", "created_at": "2024-02-28T00:00:00Z", "repo": {"name": "big/project"},
         "payload": {"action": "opened", "issue": {"number": 12}}},
        {"type": "CreateEvent", "created_at": "2024-02-27T00:00:00Z", "repo": {"name": "mallory/site"}, "payload": {}},
    ]
    entries = [
        ex(base, {"login": "mallory", "followers": 3}),
        ex(base + "/starred", [{"full_name": "big/project"}, {"full_name": "acme/widget"}], page(1)),
        ex(base + "/repos", [{"full_name": "mallory/site", "stargazers_count": 2},
                             {"full_name": "mallory/dots", "stargazers_count": 0}], page(1, type="owner")),
        ex(base + "/events/public", events, page(1)),
        ex("/repos/mallory/mallory/readme", readme),
    ]
    write("user_basic.json", entries)


def user_no_profile():
    base = "/users/quiet"
    entries = [
        ex(base, {"login": "quiet", "followers": 0}),
        ex(base + "/starred", [], page(1)),
        ex(base + "/repos", [], page(1, type="owner")),
        ex(base + "/events/public", [], page(1)),
        ex("/repos/quiet/quiet/readme", {"message": "Not Found"}, status=404),
    ]
    write("user_no_profile.json", entries)


def user_many_events():
    base = "/users/busy"
    events = [{"type": "PushEvent", "created_at": "2024-03-0%dT00:00:00Z" % (9 - i), "repo": {"name": "busy/r"},
               "payload": {}} for i in range(6)]
    entries = [
        ex(base, {"login": "busy", "followers": 1}),
        ex(base + "/starred", [], page(1, 2)),
        ex(base + "/repos", [], page(1, 2, type="owner")),
        ex(base + "/events/public", events[0:2], page(1, 2)),
        ex(base + "/events/public", events[2:4], page(2, 2)),
        ex(base + "/events/public", events[4:6], page(3, 2)),
        ex("/repos/busy/busy/readme", {"message": "Not Found"}, status=404),
    ]
    write("user_many_events.json", entries)


def search():
    q = {"q": "pushed:>=2024-03-01T00:00:00Z", "sort": "updated", "order": "desc"}
    def sp(n):
        d = dict(q)
        d.update(page(n, 2))
        return d
    def item(name):
        return {"full_name": name}
    entries = [
        ex("/search/repositories", {"total_count": 4, "items": [item("a/one"), item("b/two")]}, sp(1)),
        ex("/search/repositories", {"total_count": 4, "items": [item("b/two"), item("c/three")]}, sp(2)),
        ex("/search/repositories", {"total_count": 4, "items": []}, sp(3)),
    ]
    write("search_dedup.json", entries)
    commits = {"a/one": 3, "b/two": 1, "c/three": 2}
    pushes = list(entries)
    for name, n in commits.items():
        pushes.append(ex("/repos/%s/commits" % name, [{"sha": sha(i)} for i in range(min(n, 2))],
                         {"since": "2024-03-01T00:00:00Z", "per_page": "2", "page": "1"}))
    write("search_min_pushes.json", pushes)
    write("search_empty.json", [ex("/search/repositories", {"total_count": 0, "items": []}, sp(1))])


if __name__ == "__main__":
    repo_basic()
    repo_many_stars()
    repo_missing()
    user_basic()
    user_no_profile()
    user_many_events()
    search()
