import * as echarts from "echarts";
import type { EChartsOption } from "echarts";

export const DEFAULT_WIDTH = 960;
export const DEFAULT_HEIGHT = 600;

export function renderSvg(
    option: EChartsOption,
    width = DEFAULT_WIDTH,
    height = DEFAULT_HEIGHT,
): string {
    const chart = echarts.init(null, null, {
        renderer: "svg",
        ssr: true,
        width,
        height,
    });
    try {
        chart.setOption({ animation: false, ...option });
        return chart.renderToSVGString();
    } finally {
        chart.dispose();
    }
}
