package com.fixture.xml;

import org.junit.Test;
import static org.junit.Assert.*;

public class XmlTest {
    @Test
    public void testSetAttribute() {
        Xml xml = new Xml("root");
        xml.setAttribute("version", "1.0");
        assertTrue(xml.render().contains("version=\"1.0\""));
    }
}
