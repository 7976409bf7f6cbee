use std::sync::OnceLock;

use percent_encoding::percent_decode_str;
use regex::Regex;

fn anchor_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r#"(?i)<a\s[^>]*?href\s*=\s*(?:"([^"]*)"|'([^']*)'|([^\s>]+))"#).unwrap())
}

/// Child names scraped from an HTML index page for the directory at
/// `dir_path`. Anchors count when their target is a direct child: a
/// relative name, optionally ending in `/`, or an absolute path one level
/// below `dir_path`. Sorting, parent links, query links and anything
/// off-site are dropped. Returns `None` when the body is not HTML.
pub fn parse_index(body: &str, dir_path: &str) -> Option<Vec<String>> {
    if !body.contains('<') {
        return None;
    }
    let mut names = Vec::new();
    for caps in anchor_re().captures_iter(body) {
        let href = caps.get(1).or(caps.get(2)).or(caps.get(3)).map_or("", |m| m.as_str());
        let href = href.split(['#', '?']).next().unwrap_or("");
        let rel = if let Some(abs) = href.strip_prefix('/') {
            let Some(rest) = ("/".to_string() + abs).strip_prefix(dir_path).map(str::to_string) else {
                continue;
            };
            rest
        } else if href.contains("://") || href.starts_with("mailto:") {
            continue;
        } else {
            href.strip_prefix("./").unwrap_or(href).to_string()
        };
        let trimmed = rel.strip_suffix('/').unwrap_or(&rel);
        if trimmed.is_empty() || trimmed == "." || trimmed == ".." || trimmed.contains('/') {
            continue;
        }
        let mut name = percent_decode_str(trimmed).decode_utf8_lossy().into_owned();
        if rel.ends_with('/') {
            name.push('/');
        }
        names.push(name);
    }
    names.sort();
    names.dedup();
    Some(names)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn apache_style_index() {
        let html = r#"<html><body><h1>Index of /data/2008</h1>
<a href="?C=N;O=D">Name</a> <a href="/data/">Parent Directory</a>
<a href="ac_k0_swe_20080601_v02.cdf">ac_k0_swe_20080601_v02.cdf</a>
<a href='ac_k0_swe_20080602_v02.cdf'>x</a>
<A HREF=sub/>sub/</A>
<a href="http://elsewhere.org/x.cdf">off site</a>
</body></html>"#;
        let names = parse_index(html, "/data/2008/").unwrap();
        assert_eq!(names, vec!["ac_k0_swe_20080601_v02.cdf", "ac_k0_swe_20080602_v02.cdf", "sub/"]);
    }

    #[test]
    fn absolute_child_links_and_encoding() {
        let html = r#"<a href="/d/a%20b.csv">a</a><a href="/d/x/y.csv">deep</a><a href="../">up</a>"#;
        assert_eq!(parse_index(html, "/d/").unwrap(), vec!["a b.csv"]);
    }

    #[test]
    fn non_html_is_unparseable() {
        assert_eq!(parse_index("plain text", "/"), None);
        assert_eq!(parse_index("<html></html>", "/").unwrap(), Vec::<String>::new());
    }
}
