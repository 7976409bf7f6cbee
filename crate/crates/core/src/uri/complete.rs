use percent_encoding::utf8_percent_encode;
use serde::Serialize;

use crate::datasource::PluginRegistry;
use crate::vfs::{ResourceRef, Vfs};

use super::{parse_uri, VALUE_SET};

const RESOURCE_SCHEMES: &[&str] = &["file://", "http://", "https://"];

/// What completion may consult.
#[derive(Clone, Copy)]
pub struct CompletionContext<'a> {
    pub registry: &'a PluginRegistry,
    pub vfs: &'a Vfs,
}

/// Replace bytes `start..end` of the partial text with `text` to get
/// `completion`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Suggestion {
    pub text: String,
    pub start: usize,
    pub end: usize,
    pub completion: String,
}

impl Suggestion {
    fn new(partial: &str, start: usize, text: String) -> Suggestion {
        let completion = format!("{}{}", &partial[..start], text);
        Suggestion { text, start, end: partial.len(), completion }
    }
}

/// Context-sensitive suggestions for a partially typed URI: `vap+ext:`
/// and resource schemes first, then directory children while inside the
/// resource path, then parameter names and values after `?`.
pub fn complete(partial: &str, ctx: &CompletionContext<'_>) -> Vec<Suggestion> {
    let mut out = if let Some(q) = partial.find('?') {
        complete_query(partial, q, ctx)
    } else {
        complete_resource(partial, ctx)
    };
    out.retain(|s| s.completion.len() > partial.len() && s.completion.starts_with(&partial[..s.start]));
    let mut seen = std::collections::HashSet::new();
    out.retain(|s| seen.insert(s.completion.clone()));
    out
}

fn scheme_candidates(partial: &str, start: usize, with_vap: bool, ctx: &CompletionContext<'_>) -> Vec<Suggestion> {
    let frag = &partial[start..];
    let mut names: Vec<String> = Vec::new();
    if with_vap {
        names.extend(ctx.registry.ids().into_iter().map(|id| format!("vap+{id}:")));
    }
    names.extend(RESOURCE_SCHEMES.iter().map(|s| s.to_string()));
    names
        .into_iter()
        .filter(|n| n.starts_with(frag) && n.len() > frag.len())
        .map(|n| Suggestion::new(partial, start, n))
        .collect()
}

fn complete_resource(partial: &str, ctx: &CompletionContext<'_>) -> Vec<Suggestion> {
    let res_start = if partial.starts_with("vap+") {
        match partial.find(':') {
            Some(c) => c + 1,
            None => return scheme_candidates(partial, 0, true, ctx),
        }
    } else {
        0
    };
    let resource = &partial[res_start..];
    if !resource.contains("://") && !resource.starts_with('/') {
        return scheme_candidates(partial, res_start, res_start == 0, ctx);
    }
    let Some(slash) = resource.rfind('/') else { return Vec::new() };
    let dir_text = &resource[..=slash];
    let frag = &resource[slash + 1..];
    let Ok(dir) = ResourceRef::parse(dir_text) else { return Vec::new() };
    if dir_text.ends_with("://") && dir.is_local() {
        // "file://" alone: offer the root.
        return vec![Suggestion::new(partial, partial.len(), "/".into())];
    }
    let Ok(children) = ctx.vfs.list(&dir.as_directory()) else { return Vec::new() };
    let start = res_start + slash + 1;
    children
        .into_iter()
        .filter(|c| c.starts_with(frag))
        .map(|c| Suggestion::new(partial, start, c))
        .collect()
}

fn complete_query(partial: &str, q: usize, ctx: &CompletionContext<'_>) -> Vec<Suggestion> {
    let tok_start = partial[q + 1..].rfind('&').map_or(q + 1, |i| q + 2 + i);
    let token = &partial[tok_start..];
    let before = partial[..tok_start].trim_end_matches(['&', '?']);
    let Ok(uri) = parse_uri(before) else { return Vec::new() };
    let Ok(plugin) = ctx.registry.resolve(&uri) else { return Vec::new() };
    let local = if uri.is_templated() {
        None
    } else {
        ResourceRef::parse(&uri.resource).ok().and_then(|r| ctx.vfs.fetch(&r).ok())
    };
    match token.split_once('=') {
        Some((name, frag)) => {
            let start = tok_start + name.len() + 1;
            let values = match (&local, name) {
                (_, "timerange") => Vec::new(),
                (Some(path), _) => plugin.complete_values(name, &uri, path).unwrap_or_default(),
                (None, _) => Vec::new(),
            };
            values
                .into_iter()
                .filter(|v| v.starts_with(frag))
                .map(|v| Suggestion::new(partial, start, utf8_percent_encode(&v, VALUE_SET).to_string()))
                .collect()
        }
        None => {
            let mut names = match &local {
                Some(path) => plugin.complete_params(&uri, path).unwrap_or_default(),
                None if uri.is_templated() => {
                    plugin.param_names().iter().filter(|p| !uri.has(p)).map(|p| format!("{p}=")).collect()
                }
                None => Vec::new(),
            };
            if uri.is_templated() && !uri.has("timerange") {
                names.push("timerange=".into());
            }
            names
                .into_iter()
                .filter(|n| n.starts_with(token))
                .map(|n| Suggestion::new(partial, tok_start, n))
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::fs;

    fn texts(s: &[Suggestion]) -> Vec<&str> {
        s.iter().map(|s| s.text.as_str()).collect()
    }

    #[test]
    fn scheme_stage() {
        let reg = PluginRegistry::with_defaults();
        let vfs = Vfs::offline("/nonexistent");
        let ctx = CompletionContext { registry: &reg, vfs: &vfs };
        assert_eq!(texts(&complete("va", &ctx)), vec!["vap+dat:", "vap+qds:"]);
        assert_eq!(texts(&complete("", &ctx)), vec!["vap+dat:", "vap+qds:", "file://", "http://", "https://"]);
        let after = complete("vap+dat:h", &ctx);
        assert_eq!(texts(&after), vec!["http://", "https://"]);
        assert_eq!(after[0].completion, "vap+dat:http://");
    }

    #[test]
    fn path_and_param_stages() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("fixture.csv"), "time,density,speed\n2008-06-01T00:00Z,1,2\n").unwrap();
        fs::write(dir.path().join("empty.csv"), "").unwrap();
        fs::create_dir(dir.path().join("data")).unwrap();
        let reg = PluginRegistry::with_defaults();
        let vfs = Vfs::offline(dir.path().join("cache"));
        let ctx = CompletionContext { registry: &reg, vfs: &vfs };
        let base = format!("file://{}", dir.path().display());

        let s = complete(&format!("{base}/"), &ctx);
        assert_eq!(texts(&s), vec!["data/", "empty.csv", "fixture.csv"]);
        let s = complete(&format!("{base}/fi"), &ctx);
        assert_eq!(s[0].completion, format!("{base}/fixture.csv"));

        let s = complete(&format!("{base}/fixture.csv?"), &ctx);
        assert_eq!(texts(&s), vec!["delim=", "skip=", "column=", "depend0=", "fill=", "bundle="]);
        let s = complete(&format!("{base}/fixture.csv?skip=0&col"), &ctx);
        assert_eq!(texts(&s), vec!["column="]);
        let s = complete(&format!("{base}/fixture.csv?column="), &ctx);
        assert_eq!(texts(&s), vec!["time", "density", "speed"]);
        let s = complete(&format!("{base}/fixture.csv?column=d"), &ctx);
        assert_eq!(texts(&s), vec!["density"]);
        assert!(complete(&format!("{base}/empty.csv?"), &ctx).is_empty());
        assert!(complete(&format!("{base}/nosuch.csv?"), &ctx).is_empty());
    }

    #[test]
    fn templated_offers_timerange() {
        let reg = PluginRegistry::with_defaults();
        let vfs = Vfs::offline("/nonexistent");
        let ctx = CompletionContext { registry: &reg, vfs: &vfs };
        let s = complete("file:///d/$Y/x_$Y$m$d.csv?Np&t", &ctx);
        assert_eq!(texts(&s), vec!["timerange="]);
    }
}
