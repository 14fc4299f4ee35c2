fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

fn is_sigil(c: char) -> bool {
    c == '#' || c == '@'
}

/// Lowercased word tokens.
///
/// Splits on anything that is not alphanumeric, except an apostrophe with
/// letters on both sides (`i'm`). A `#` or `@` at the start of a word keeps
/// its sigil and may contain underscores (`@some_user`, `#help`).
pub fn tokenize(text: &str) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut sigil = false;
    let flush = |current: &mut String, sigil: &mut bool, tokens: &mut Vec<String>| {
        let bare = current.len() == 1 && *sigil;
        if !current.is_empty() && !bare {
            tokens.push(std::mem::take(current));
        }
        current.clear();
        *sigil = false;
    };

    for (i, &c) in chars.iter().enumerate() {
        let next = chars.get(i + 1).copied();
        if c.is_alphanumeric() {
            current.extend(c.to_lowercase());
        } else if sigil && c == '_' {
            current.push(c);
        } else if is_apostrophe(c)
            && current.chars().last().is_some_and(char::is_alphanumeric)
            && next.is_some_and(char::is_alphanumeric)
        {
            current.push('\'');
        } else if is_sigil(c)
            && current.is_empty()
            && next.is_some_and(|n| n.is_alphanumeric() || n == '_')
        {
            current.push(c);
            sigil = true;
        } else {
            flush(&mut current, &mut sigil, &mut tokens);
        }
    }
    flush(&mut current, &mut sigil, &mut tokens);
    tokens
}
