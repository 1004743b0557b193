//! Minimal SVG 1.1 writer. Coordinates are written with two fixed decimals
//! and elements in insertion order, so equal documents serialize to equal
//! bytes.

use std::fmt::Write;

#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    Rect {
        x: f64,
        y: f64,
        width: f64,
        height: f64,
        fill: &'static str,
        attrs: Vec<(&'static str, String)>,
        title: Option<String>,
    },
    Circle {
        cx: f64,
        cy: f64,
        r: f64,
        fill: &'static str,
        opacity: f64,
        attrs: Vec<(&'static str, String)>,
        title: Option<String>,
    },
    Line {
        x1: f64,
        y1: f64,
        x2: f64,
        y2: f64,
        stroke: &'static str,
    },
    Text {
        x: f64,
        y: f64,
        content: String,
        size: f64,
        anchor: Anchor,
        fill: &'static str,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Anchor {
    Start,
    Middle,
    End,
}

impl Anchor {
    fn name(self) -> &'static str {
        match self {
            Anchor::Start => "start",
            Anchor::Middle => "middle",
            Anchor::End => "end",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvgDocument {
    pub width: f64,
    pub height: f64,
    pub elements: Vec<Element>,
}

pub fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn write_attrs(out: &mut String, attrs: &[(&'static str, String)]) {
    for (k, v) in attrs {
        write!(out, " {k}=\"{}\"", escape(v)).unwrap();
    }
}

impl SvgDocument {
    pub fn new(width: f64, height: f64) -> Self {
        SvgDocument {
            width,
            height,
            elements: Vec::new(),
        }
    }

    pub fn push(&mut self, e: Element) {
        self.elements.push(e);
    }

    pub fn circles(&self) -> impl Iterator<Item = &Element> {
        self.elements.iter().filter(|e| matches!(e, Element::Circle { .. }))
    }

    pub fn rects(&self) -> impl Iterator<Item = &Element> {
        self.elements.iter().filter(|e| matches!(e, Element::Rect { .. }))
    }

    pub fn to_svg_string(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w:.2}\" height=\"{h:.2}\" viewBox=\"0 0 {w:.2} {h:.2}\" font-family=\"sans-serif\">",
            w = self.width,
            h = self.height
        )
        .unwrap();
        for e in &self.elements {
            match e {
                Element::Rect {
                    x,
                    y,
                    width,
                    height,
                    fill,
                    attrs,
                    title,
                } => {
                    write!(
                        out,
                        "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{width:.2}\" height=\"{height:.2}\" fill=\"{fill}\""
                    )
                    .unwrap();
                    write_attrs(&mut out, attrs);
                    close_as(&mut out, "rect", title);
                }
                Element::Circle {
                    cx,
                    cy,
                    r,
                    fill,
                    opacity,
                    attrs,
                    title,
                } => {
                    write!(
                        out,
                        "<circle cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"{r:.2}\" fill=\"{fill}\" fill-opacity=\"{opacity:.2}\""
                    )
                    .unwrap();
                    write_attrs(&mut out, attrs);
                    close_as(&mut out, "circle", title);
                }
                Element::Line { x1, y1, x2, y2, stroke } => {
                    writeln!(
                        out,
                        "<line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" stroke=\"{stroke}\"/>"
                    )
                    .unwrap();
                }
                Element::Text {
                    x,
                    y,
                    content,
                    size,
                    anchor,
                    fill,
                } => {
                    writeln!(
                        out,
                        "<text x=\"{x:.2}\" y=\"{y:.2}\" font-size=\"{size:.2}\" text-anchor=\"{}\" fill=\"{fill}\">{}</text>",
                        anchor.name(),
                        escape(content)
                    )
                    .unwrap();
                }
            }
        }
        out.push_str("</svg>\n");
        out
    }
}

fn close_as(out: &mut String, tag: &str, title: &Option<String>) {
    match title {
        Some(t) => writeln!(out, "><title>{}</title></{tag}>", escape(t)).unwrap(),
        None => out.push_str("/>\n"),
    }
}
