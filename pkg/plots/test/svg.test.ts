import { describe, expect, it } from "vitest";

import { el, escapeText, label3, polyline, scaleLinear, scaleLog, svgDocument, text } from "../src/svg.js";

describe("svg builder", () => {
  it("escapes text and attribute content", () => {
    expect(escapeText('a<b>&"c')).toBe("a&lt;b&gt;&amp;&quot;c");
    expect(text("x<y")).toBe("<text>x&lt;y</text>");
    expect(el("g", { "data-v": '1"2' })).toBe('<g data-v="1&quot;2"/>');
  });

  it("builds nested documents", () => {
    const doc = svgDocument(10, 20, [el("g", {}, [text("hi")])]);
    expect(doc).toContain('viewBox="0 0 10 20"');
    expect(doc).toContain("<g><text>hi</text></g>");
  });

  it("scales linearly and logarithmically", () => {
    const lin = scaleLinear(0, 10, 100, 200);
    expect(lin(5)).toBeCloseTo(150, 12);
    const log = scaleLog(1, 100, 0, 2);
    expect(log(10)).toBeCloseTo(1, 12);
  });

  it("renders polylines with rounded pixel coordinates", () => {
    expect(polyline([[1.234, 5.678]], { stroke: "red" })).toContain('points="1.23,5.68"');
  });

  it("label3 keeps three mantissa decimals", () => {
    expect(label3(0.0012500000000004547)).toBe("1.250e-3");
    expect(label3(-3.9997970604906117)).toBe("-4.000e+0");
  });
});
